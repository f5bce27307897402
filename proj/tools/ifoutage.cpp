// Command-line surface over the library: achievable rates, analytic outage
// bounds, Monte Carlo outage sweeps, and guaranteed multicast rates, all
// emitted as CSV with a JSON manifest sibling.  Re-running a manifest
// reproduces the CSV byte for byte.
//
// Exit codes: 0 success, 2 usage/parse errors, 3 domain/numeric errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifoutage/bounds.hpp"
#include "ifoutage/channel.hpp"
#include "ifoutage/csv.hpp"
#include "ifoutage/manifest.hpp"
#include "ifoutage/montecarlo.hpp"
#include "ifoutage/multicast.hpp"
#include "ifoutage/random.hpp"
#include "ifoutage/rates.hpp"
#include "ifoutage/version.hpp"

namespace {

using nlohmann::json;
using namespace ifoutage;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("IF_OUTAGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

BoundVariants parse_variants(const std::vector<std::string>& names) {
  BoundVariants v;
  for (const auto& n : names) {
    if (n == "primitive")
      v.primitive = true;
    else if (n == "quadruple")
      v.quadruple = true;
    else if (n == "tightened")
      v.tightened = true;
    else if (n == "exact-cap")
      v.exact_cap = true;
    else
      throw usage_error("unknown variant: " + n);
  }
  return v;
}

std::string variant_label(const BoundVariants& v) {
  std::string s;
  const auto add = [&](const char* name) {
    if (!s.empty()) s += '+';
    s += name;
  };
  if (v.primitive) add("primitive");
  if (v.quadruple) add("quadruple");
  if (v.tightened) add("tightened");
  if (v.exact_cap) add("exact-cap");
  return s.empty() ? "plain" : s;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "mmse") return Scheme::MMSE;
  if (name == "if") return Scheme::IF;
  if (name == "if-sic") return Scheme::IF_SIC;
  if (name == "joint-ml") return Scheme::JOINT_ML;
  throw usage_error("unknown scheme: " + name);
}

BoundSelector::Kind parse_bound_kind(const std::string& name) {
  if (name == "if-union") return BoundSelector::Kind::IfUnion;
  if (name == "if-universal") return BoundSelector::Kind::IfUniversal;
  if (name == "sic-union") return BoundSelector::Kind::SicUnion;
  if (name == "sic-universal") return BoundSelector::Kind::SicUniversal;
  throw usage_error("unknown bound: " + name);
}

std::vector<double> gap_grid(double gap_min, double gap_max, double gap_step) {
  if (gap_step <= 0.0) throw usage_error("--gap-step must be > 0");
  if (gap_max < gap_min) throw usage_error("--gap-max must be >= --gap-min");
  std::vector<double> gaps;
  for (double g = gap_min; g <= gap_max + 1e-12; g += gap_step)
    gaps.push_back(g);
  return gaps;
}

std::string int_matrix_to_string(const IntegerMatrix& a) {
  std::string s;
  for (int r = 0; r < a.entries.rows(); ++r) {
    if (r) s += '|';
    for (int c = 0; c < a.entries.cols(); ++c) {
      if (c) s += ';';
      s += std::to_string(a.entries(r, c));
    }
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << body;
}

// ---------------------------------------------------------------------------
// rates

std::string run_rates(const json& p) {
  const std::string source = p.at("source").get<std::string>();
  ComplexChannel h = [&]() -> ComplexChannel {
    if (source == "file") {
      try {
        return read_channel_csv(p.at("channel_file").get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
      }
    }
    const int nt = p.at("nt").get<int>();
    if (source == "identity")
      return ComplexChannel(Eigen::MatrixXcd::Identity(nt, nt));
    if (source == "worst")
      return worst_case_channel(p.at("capacity").get<double>(), nt);
    if (source == "rayleigh") {
      RandomStream rs{p.at("seed").get<std::uint64_t>(), 0, 0};
      return sample_normalized_rayleigh(nt, p.at("capacity").get<double>(),
                                        rs);
    }
    throw usage_error("unknown channel source: " + source);
  }();

  const bool exact = p.at("exact").get<bool>();
  const bool print_a = p.at("print_a").get<bool>();
  const std::string scheme_sel = p.at("scheme").get<std::string>();
  const RealChannel hr = realify(h);

  std::vector<RateReport> reports;
  const auto want = [&](const char* s) {
    return scheme_sel == "all" || scheme_sel == s;
  };
  if (want("mmse")) reports.push_back(mmse_rate(hr));
  if (want("if")) reports.push_back(if_rate(hr, exact));
  if (want("if-sic")) reports.push_back(if_sic_rate(hr, exact));
  if (want("joint-ml")) reports.push_back(joint_ml_rate(h));
  if (reports.empty()) throw usage_error("unknown scheme: " + scheme_sel);

  std::ostringstream out;
  out << "scheme,total_rate_bits";
  for (int m = 0; m < 2 * h.n_t(); ++m) out << ",stream_" << (m + 1);
  if (print_a) out << ",a_matrix";
  out << '\n';
  for (const auto& r : reports) {
    out << scheme_name(r.scheme) << ',' << fmt_double(r.total_rate_bits);
    for (const double b : r.per_stream_bits) out << ',' << fmt_double(b);
    if (print_a)
      out << ','
          << (r.integer_matrix ? int_matrix_to_string(*r.integer_matrix)
                               : std::string{});
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// bound

std::string run_bound(const json& p) {
  const auto kind = parse_bound_kind(p.at("bound").get<std::string>());
  const int nt = p.at("nt").get<int>();
  const double c_bits = p.at("capacity").get<double>();
  const auto gaps = gap_grid(p.at("gap_min").get<double>(),
                             p.at("gap_max").get<double>(),
                             p.at("gap_step").get<double>());
  const BoundVariants variants =
      parse_variants(p.at("variants").get<std::vector<std::string>>());
  const int grid_res = p.at("grid_res").get<int>();
  const std::size_t enum_cap = p.at("enum_cap").get<std::size_t>();
  const bool reference = p.at("reference").get<bool>();
  const std::string label = variant_label(variants);

  const bool needs_grid = kind == BoundSelector::Kind::IfUnion ||
                          kind == BoundSelector::Kind::SicUnion;
  std::vector<SpectrumD> grid;
  if (needs_grid) grid = spectrum_grid(c_bits, nt, grid_res);

  std::ostringstream out;
  out << "gap_bits,bound_value,variant,argmax_spectrum\n";
  for (const double gap : gaps) {
    double value = 0.0;
    std::string argmax;
    switch (kind) {
      case BoundSelector::Kind::IfUniversal:
        value = if_outage_universal_bound(nt, gap, variants.tightened);
        break;
      case BoundSelector::Kind::SicUniversal:
        value = sic_outage_universal_bound(gap, variants.tightened);
        break;
      case BoundSelector::Kind::IfUnion: {
        const auto wc = worst_case_bound(c_bits, gap, nt, BoundScheme::IF,
                                         grid, variants, enum_cap);
        value = wc.value;
        argmax = spectrum_to_string(grid[wc.argmax_index]);
        break;
      }
      case BoundSelector::Kind::SicUnion: {
        const auto wc = worst_case_bound(c_bits, gap, nt, BoundScheme::IF_SIC,
                                         grid, variants, enum_cap);
        value = wc.value;
        argmax = spectrum_to_string(grid[wc.argmax_index]);
        break;
      }
    }
    out << fmt_double(gap) << ',' << fmt_double(value) << ',' << label << ','
        << argmax << '\n';
  }
  if (reference && nt == 2)
    out << fmt_double(kNvdBenchmarkGapBits) << ",,reference,\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// simulate

std::string run_simulate(const json& p) {
  SimConfig cfg;
  cfg.scheme = parse_scheme(p.at("scheme").get<std::string>());
  cfg.n_samples = p.at("samples").get<std::int64_t>();
  cfg.seed = RandomStream{p.at("seed").get<std::uint64_t>(), 0, 0};
  cfg.exact_if = p.at("exact").get<bool>();
  cfg.threads = resolve_threads(p.at("threads").get<int>());
  const double c_bits = p.at("capacity").get<double>();
  const int nt = p.at("nt").get<int>();
  cfg.grid = spectrum_grid(c_bits, nt, p.at("grid_res").get<int>());
  const auto gaps = gap_grid(p.at("gap_min").get<double>(),
                             p.at("gap_max").get<double>(),
                             p.at("gap_step").get<double>());

  const auto curve = worst_case_empirical(c_bits, gaps, cfg);
  std::ostringstream out;
  out << "gap_bits,p_hat,ci95,argmax_spectrum\n";
  for (const auto& pt : curve)
    out << fmt_double(pt.gap_bits) << ',' << fmt_double(pt.estimate.p_hat)
        << ',' << fmt_double(pt.estimate.ci95_halfwidth) << ','
        << spectrum_to_string(cfg.grid[pt.argmax_index]) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// pdf

SpectrumD parse_spectrum(const std::string& text) {
  std::vector<double> d;
  std::string cur;
  for (const char c : text + ";") {
    if (c == ';') {
      if (!cur.empty()) d.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  double half_logdet = 0.0;
  for (const double x : d) half_logdet += 0.5 * std::log2(x);
  try {
    return SpectrumD(std::move(d), half_logdet);
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("--spectrum: ") + e.what());
  }
}

std::string run_pdf(const json& p) {
  SimConfig cfg;
  cfg.n_samples = p.at("samples").get<std::int64_t>();
  cfg.seed = RandomStream{p.at("seed").get<std::uint64_t>(), 0, 0};
  cfg.exact_if = p.at("exact").get<bool>();
  cfg.threads = resolve_threads(p.at("threads").get<int>());
  cfg.bin_width_bits = p.at("bin_width").get<double>();
  const Scheme scheme = parse_scheme(p.at("scheme").get<std::string>());
  const std::string ensemble = p.at("ensemble").get<std::string>();

  RateHistogram hist;
  if (ensemble == "rayleigh") {
    hist = rate_pdf(RateEnsemble::NormalizedRayleigh, scheme, cfg,
                    p.at("capacity").get<double>(), p.at("nt").get<int>());
  } else if (ensemble == "fixed") {
    cfg.grid = {parse_spectrum(p.at("spectrum").get<std::string>())};
    hist = rate_pdf(RateEnsemble::FixedSpectrumCue, scheme, cfg);
  } else {
    throw usage_error("unknown ensemble: " + ensemble);
  }

  std::ostringstream out;
  out << "bin_lo_bits,mass\n";
  for (std::size_t i = 0; i < hist.mass.size(); ++i)
    out << fmt_double(i * hist.bin_width) << ',' << fmt_double(hist.mass[i])
        << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// multicast

std::string run_multicast(const json& p) {
  BoundSelector sel;
  sel.kind = parse_bound_kind(p.at("bound").get<std::string>());
  sel.variants = parse_variants(p.at("variants").get<std::vector<std::string>>());
  sel.grid_resolution = p.at("grid_res").get<int>();

  double c_bits;
  int nt;
  std::vector<int> users;
  if (p.contains("user_channel_files") &&
      !p.at("user_channel_files").empty()) {
    std::vector<ComplexChannel> channels;
    for (const auto& f : p.at("user_channel_files")) {
      try {
        channels.push_back(read_channel_csv(f.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
      }
    }
    nt = channels[0].n_t();
    for (const auto& ch : channels)
      if (ch.n_t() != nt)
        throw usage_error("user channels disagree on transmit antennas");
    MulticastScenario sc(std::move(channels));
    normalize_users(sc);  // validates the scenario
    c_bits = sc.c_multicast;
    users = {sc.k_users};
  } else {
    c_bits = p.at("capacity").get<double>();
    nt = p.at("nt").get<int>();
    users = p.at("users").get<std::vector<int>>();
    if (users.empty()) throw usage_error("--users must be nonempty");
  }

  std::ostringstream out;
  out << "users,guaranteed_rate_bits,gap_bits,margin\n";
  for (const int k : users) {
    const double r = guaranteed_rate(c_bits, k, nt, sel);
    const double probe_rate = std::max(0.0, r - 1e-3);
    const double margin =
        r > 0.0 ? existence_margin(c_bits, probe_rate, k, nt, sel) : 0.0;
    out << k << ',' << fmt_double(r) << ',' << fmt_double(c_bits - r) << ','
        << fmt_double(margin) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::string dispatch(const std::string& command, const json& params) {
  if (command == "rates") return run_rates(params);
  if (command == "bound") return run_bound(params);
  if (command == "simulate") return run_simulate(params);
  if (command == "pdf") return run_pdf(params);
  if (command == "multicast") return run_multicast(params);
  throw usage_error("unknown command in manifest: " + command);
}

int run_and_write(const std::string& command, const json& params,
                  const std::string& out_path) {
  WallClock clock;
  const std::string csv = dispatch(command, params);
  write_text_file(out_path, csv);
  RunManifest manifest;
  manifest.command = command;
  manifest.params = params;
  manifest.seed = params.value("seed", std::uint64_t{0});
  manifest.wall_time_seconds = clock.seconds();
  manifest.save(out_path + ".manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer-forcing outage analysis under random unitary "
               "pre-processing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string out_path;
  int threads_flag = 0;

  // rates
  auto* rates = app.add_subcommand(
      "rates", "Achievable rates of one channel for each receiver scheme");
  std::string rates_channel, rates_source = "file", rates_scheme = "all";
  double rates_capacity = 8.0;
  int rates_nt = 2;
  std::uint64_t rates_seed = 0;
  bool rates_heuristic = false, rates_print_a = false;
  rates->add_option("--channel", rates_channel, "channel CSV file");
  rates->add_option("--synth", rates_source,
                    "synthetic source: worst|identity|rayleigh");
  rates->add_option("--scheme", rates_scheme, "mmse|if|if-sic|joint-ml|all");
  rates->add_option("--capacity", rates_capacity, "capacity for --synth");
  rates->add_option("--nt", rates_nt, "transmit antennas for --synth");
  rates->add_option("--seed", rates_seed, "seed (decimal 64-bit)");
  rates->add_flag("--heuristic", rates_heuristic,
                  "LLL-based rates instead of exact enumeration");
  rates->add_flag("--print-a", rates_print_a, "include the integer matrix");
  rates->add_option("--out", out_path, "output CSV path")->required();
  rates->add_option("--threads", threads_flag, "worker cap");

  // bound
  auto* bound = app.add_subcommand(
      "bound", "Analytic worst-case outage bounds over a gap sweep");
  std::string bound_kind = "if-union";
  double bound_capacity = 14.0, bound_gap_min = 1.5, bound_gap_max = 15.0,
         bound_gap_step = 0.5;
  int bound_nt = 2, bound_grid_res = 50;
  std::size_t bound_enum_cap = 100'000'000;
  std::vector<std::string> bound_variants;
  bool bound_reference = false;
  bound->add_option("--bound", bound_kind,
                    "if-union|if-universal|sic-union|sic-universal");
  bound->add_option("--nt", bound_nt, "transmit antennas");
  bound->add_option("--capacity", bound_capacity, "capacity in bits");
  bound->add_option("--gap-min", bound_gap_min, "first gap (bits)");
  bound->add_option("--gap-max", bound_gap_max, "last gap (bits)");
  bound->add_option("--gap-step", bound_gap_step, "gap step (bits)");
  bound->add_option("--variants", bound_variants,
                    "comma list: primitive,quadruple,tightened,exact-cap")
      ->delimiter(',');
  bound->add_option("--grid-res", bound_grid_res, "spectrum grid resolution");
  bound->add_option("--enum-cap", bound_enum_cap, "enumeration size cap");
  bound->add_flag("--reference", bound_reference,
                  "add the space-time benchmark gap row (nt=2)");
  bound->add_option("--out", out_path, "output CSV path")->required();

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo worst-case outage sweep under CUE draws");
  std::string sim_scheme = "if";
  double sim_capacity = 14.0, sim_gap_min = 1.5, sim_gap_max = 15.0,
         sim_gap_step = 0.5;
  int sim_nt = 2, sim_grid_res = 20;
  std::int64_t sim_samples = 10000;
  std::uint64_t sim_seed = 42;
  bool sim_heuristic = false;
  simulate->add_option("--scheme", sim_scheme, "mmse|if|if-sic|joint-ml");
  simulate->add_option("--capacity", sim_capacity, "capacity in bits");
  simulate->add_option("--nt", sim_nt, "transmit antennas");
  simulate->add_option("--gap-min", sim_gap_min, "first gap (bits)");
  simulate->add_option("--gap-max", sim_gap_max, "last gap (bits)");
  simulate->add_option("--gap-step", sim_gap_step, "gap step (bits)");
  simulate->add_option("--samples", sim_samples, "CUE samples per spectrum");
  simulate->add_option("--seed", sim_seed, "seed (decimal 64-bit)");
  simulate->add_option("--grid-res", sim_grid_res, "spectrum grid resolution");
  simulate->add_flag("--heuristic", sim_heuristic, "LLL-based rates");
  simulate->add_option("--threads", threads_flag, "worker cap");
  simulate->add_option("--out", out_path, "output CSV path")->required();

  // pdf
  auto* pdf = app.add_subcommand(
      "pdf", "Binned rate distribution under a channel ensemble");
  std::string pdf_ensemble = "rayleigh", pdf_scheme = "if",
              pdf_spectrum;
  double pdf_capacity = 8.0, pdf_bin_width = 0.05;
  int pdf_nt = 2;
  std::int64_t pdf_samples = 10000;
  std::uint64_t pdf_seed = 42;
  bool pdf_heuristic = false;
  pdf->add_option("--ensemble", pdf_ensemble, "rayleigh|fixed");
  pdf->add_option("--scheme", pdf_scheme, "mmse|if|if-sic|joint-ml");
  pdf->add_option("--capacity", pdf_capacity, "capacity (rayleigh)");
  pdf->add_option("--nt", pdf_nt, "transmit antennas (rayleigh)");
  pdf->add_option("--spectrum", pdf_spectrum,
                  "semicolon-separated paired diagonal (fixed ensemble)");
  pdf->add_option("--samples", pdf_samples, "number of draws");
  pdf->add_option("--seed", pdf_seed, "seed (decimal 64-bit)");
  pdf->add_option("--bin-width", pdf_bin_width, "histogram bin width (bits)");
  pdf->add_flag("--heuristic", pdf_heuristic, "LLL-based rates");
  pdf->add_option("--threads", threads_flag, "worker cap");
  pdf->add_option("--out", out_path, "output CSV path")->required();

  // multicast
  auto* multicast = app.add_subcommand(
      "multicast", "Guaranteed common rates for closed-loop multicast");
  std::string mc_bound = "sic-union";
  double mc_capacity = 14.0;
  int mc_nt = 2, mc_grid_res = 50;
  std::vector<int> mc_users{2, 3, 4};
  std::vector<std::string> mc_variants{"exact-cap"};
  std::vector<std::string> mc_user_files;
  multicast->add_option("--capacity", mc_capacity, "multicast capacity");
  multicast->add_option("--nt", mc_nt, "transmit antennas");
  multicast->add_option("--users", mc_users, "user counts")->delimiter(',');
  multicast->add_option("--user-channel", mc_user_files,
                        "channel CSV per user (repeatable)");
  multicast->add_option("--bound", mc_bound,
                        "if-union|if-universal|sic-union|sic-universal");
  multicast->add_option("--variants", mc_variants,
                        "comma list: primitive,quadruple,tightened,exact-cap")
      ->delimiter(',');
  multicast->add_option("--grid-res", mc_grid_res, "spectrum grid resolution");
  multicast->add_option("--out", out_path, "output CSV path")->required();

  // rerun
  auto* rerun = app.add_subcommand(
      "rerun", "Re-run a saved manifest and reproduce its CSV");
  std::string rerun_manifest;
  rerun->add_option("manifest", rerun_manifest, "manifest JSON path")
      ->required();
  rerun->add_option("--out", out_path, "output CSV path")->required();
  rerun->add_option("--threads", threads_flag, "worker cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    json params;
    std::string command;
    if (rates->parsed()) {
      command = "rates";
      params["source"] = rates->count("--channel") ? "file" : rates_source;
      params["channel_file"] = rates_channel;
      params["scheme"] = rates_scheme;
      params["capacity"] = rates_capacity;
      params["nt"] = rates_nt;
      params["seed"] = rates_seed;
      params["exact"] = !rates_heuristic;
      params["print_a"] = rates_print_a;
    } else if (bound->parsed()) {
      command = "bound";
      params["bound"] = bound_kind;
      params["nt"] = bound_nt;
      params["capacity"] = bound_capacity;
      params["gap_min"] = bound_gap_min;
      params["gap_max"] = bound_gap_max;
      params["gap_step"] = bound_gap_step;
      params["variants"] = bound_variants;
      params["grid_res"] = bound_grid_res;
      params["enum_cap"] = bound_enum_cap;
      params["reference"] = bound_reference;
      params["seed"] = std::uint64_t{0};
    } else if (simulate->parsed()) {
      command = "simulate";
      params["scheme"] = sim_scheme;
      params["capacity"] = sim_capacity;
      params["nt"] = sim_nt;
      params["gap_min"] = sim_gap_min;
      params["gap_max"] = sim_gap_max;
      params["gap_step"] = sim_gap_step;
      params["samples"] = sim_samples;
      params["seed"] = sim_seed;
      params["grid_res"] = sim_grid_res;
      params["exact"] = !sim_heuristic;
      params["threads"] = threads_flag;
    } else if (pdf->parsed()) {
      command = "pdf";
      params["ensemble"] = pdf_ensemble;
      params["scheme"] = pdf_scheme;
      params["capacity"] = pdf_capacity;
      params["nt"] = pdf_nt;
      params["spectrum"] = pdf_spectrum;
      params["samples"] = pdf_samples;
      params["seed"] = pdf_seed;
      params["bin_width"] = pdf_bin_width;
      params["exact"] = !pdf_heuristic;
      params["threads"] = threads_flag;
    } else if (multicast->parsed()) {
      command = "multicast";
      params["bound"] = mc_bound;
      params["capacity"] = mc_capacity;
      params["nt"] = mc_nt;
      params["users"] = mc_users;
      params["user_channel_files"] = mc_user_files;
      params["variants"] = mc_variants;
      params["grid_res"] = mc_grid_res;
      params["seed"] = std::uint64_t{0};
    } else if (rerun->parsed()) {
      RunManifest m;
      try {
        m = RunManifest::load(rerun_manifest);
      } catch (const std::exception& e) {
        throw usage_error(e.what());
      }
      command = m.command;
      params = m.params;
      if (threads_flag > 0 && params.contains("threads"))
        params["threads"] = threads_flag;
    }
    return run_and_write(command, params, out_path);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
