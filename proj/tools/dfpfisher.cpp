// dfpfisher: scans, probe optimisation, tomography comparison and weak-field
// homodyne tables from the command line.
//
// Exit codes: 0 success, 2 malformed input or usage, 3 infeasible
// optimisation, 1 anything else.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cli_args.hpp"
#include "dfpfisher/dfpfisher.hpp"

namespace {

using namespace dfpfisher;
using cli::UsageError;

constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kDeg = std::numbers::pi / 180.0;

struct Output {
  std::string path = "-";
  unsigned threads = 1;
};

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("-o,--out", o.path, "Output file (.csv or .json); '-' for stdout");
  sub->add_option("--threads", o.threads, "Worker threads for scan points")->check(CLI::Range(1u, 256u));
}

/// Every option of the subcommand as given or defaulted, minus the ones that
/// do not affect the numbers.
std::vector<std::pair<std::string, std::string>> resolved_config(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> cfg{{"command", sub->get_name()}};
  for (const auto* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "threads") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    cfg.emplace_back(name, value.empty() ? "(none)" : value);
  }
  return cfg;
}

void emit(const io::ResultTable& t, const Output& o) {
  if (o.path == "-") {
    std::cout << io::render_csv(t);
    return;
  }
  io::write_atomic(o.path, io::render(t, o.path));
}

ChannelOrder parse_order(const std::string& s) {
  if (s == "vu") return ChannelOrder::PhaseThenRotation;
  if (s == "uv") return ChannelOrder::RotationThenPhase;
  throw UsageError("--order must be vu or uv");
}

Scalarization parse_scalarization(const std::string& s) {
  if (s == "sum") return Scalarization::Sum;
  if (s == "min") return Scalarization::Min;
  if (s == "phi") return Scalarization::PhiOnly;
  if (s == "chi") return Scalarization::ChiOnly;
  throw UsageError("--scalarization must be sum, min, phi or chi");
}

bool parse_params(const std::string& s) {
  if (s == "phi") return false;
  if (s == "phi,chi") return true;
  throw UsageError("--params must be phi or phi,chi");
}

// ---------------------------------------------------------------------------
// Detector source: a DFP table file or a synthetic detector model

struct Source {
  std::string model;
  std::string table;
  double t_h = 0.5;
  double t_v = 0.5;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double row_tolerance = 1e-6;
  std::optional<DfpTable> loaded;

  void add(CLI::App* sub, bool allow_table, const std::string& model_flag = "--model") {
    auto* m = sub->add_option(model_flag, model, "Detector model: waveplate, zx, hv, da, random");
    if (allow_table) {
      auto* t = sub->add_option("--table", table, "DFP table file (.csv or .json)");
      m->excludes(t);
      sub->add_option("--row-tol", row_tolerance, "Row normalisation tolerance for table files");
    }
    sub->add_option("--t-h", t_h, "zx model: transmission of H");
    sub->add_option("--t-v", t_v, "zx model: transmission of V");
    sub->add_option("--noise", noise, "Gaussian noise on synthetic DFPs");
    sub->add_option("--seed", seed, "Seed for noise and random models");
  }

  void prepare() {
    if (model.empty() == table.empty()) throw UsageError("exactly one of --model and --table is required");
    if (!table.empty()) loaded = io::load_dfp(table, row_tolerance);
  }

  Povm povm(double theta_deg, std::uint64_t point_seed) const {
    if (model == "waveplate") return waveplate_povm(theta_deg * kDeg);
    if (model == "zx") return zx_povm(t_h, t_v);
    if (model == "hv") return hv_povm();
    if (model == "da") return da_povm();
    if (model == "random") {
      std::mt19937_64 rng(point_seed);
      return random_povm(4, rng);
    }
    throw UsageError("unknown model '" + model + "'");
  }

  DfpTable dfp(double theta_deg, std::size_t point) const {
    if (loaded) return *loaded;
    return synth_dfp(povm(theta_deg, seed), noise, seed + point);
  }
};

struct ChannelArgs {
  std::string theta = "22.5";
  std::string phi = "0";
  std::string chi = "0";
  std::string params = "phi";
  std::string order = "vu";

  void add(CLI::App* sub, bool with_theta) {
    if (with_theta) sub->add_option("--theta", theta, "Waveplate angle in degrees (value, list or a:b:c)");
    sub->add_option("--phi", phi, "Phase phi in radians (value, list or a:b:c)");
    sub->add_option("--chi", chi, "Rotation chi in radians (value, list or a:b:c)");
    sub->add_option("--params", params, "Estimated parameters: phi or phi,chi");
    sub->add_option("--order", order, "Operator product: vu (phase first) or uv (rotation first)");
  }
};

struct SearchArgs {
  double eps = 0.0;
  double grid_step = 2.0;
  std::size_t starts = 3;
  std::string scalarization = "sum";

  void add(CLI::App* sub) {
    sub->add_option("--eps", eps, "Positivity filter threshold");
    sub->add_option("--grid-step", grid_step, "Probe grid spacing in degrees");
    sub->add_option("--starts", starts, "Grid maxima refined");
    sub->add_option("--scalarization", scalarization, "Two-parameter objective: sum, min, phi, chi");
  }

  SearchOptions options() const {
    SearchOptions o;
    if (!(eps >= 0.0)) throw UsageError("--eps must be >= 0");
    o.eps = eps;
    o.grid_step_deg = grid_step;
    o.starts = starts;
    o.scalarization = parse_scalarization(scalarization);
    return o;
  }
};

// ---------------------------------------------------------------------------
// fisher-scan

struct FisherScan {
  Source source;
  ChannelArgs channel;
  SearchArgs search;
  std::string probe = "auto";
  Output out;
};

CLI::App* register_fisher_scan(CLI::App& app, FisherScan& a) {
  auto* sub = app.add_subcommand("fisher-scan", "Fisher information along a theta, phi or chi scan");
  a.source.add(sub, true);
  a.channel.add(sub, true);
  a.search.add(sub);
  sub->add_option("--probe", a.probe, "auto (optimise per point) or x,y,z");
  add_output(sub, a.out);
  return sub;
}

io::ResultTable run_fisher_scan(FisherScan& a, const CLI::App* sub) {
  a.source.prepare();
  const bool two = parse_params(a.channel.params);
  const auto order = parse_order(a.channel.order);
  const auto opts = a.search.options();
  const auto thetas = cli::parse_range(a.channel.theta, "--theta");
  const auto phis = cli::parse_range(a.channel.phi, "--phi");
  const auto chis = cli::parse_range(a.channel.chi, "--chi");
  if ((thetas.size() > 1) + (phis.size() > 1) + (chis.size() > 1) > 1)
    throw UsageError("only one of --theta, --phi, --chi may be a range");
  if (thetas.size() > 1 && a.source.model != "waveplate") throw UsageError("--theta scans need --model waveplate");
  std::string axis = "phi";
  std::size_t n = phis.size();
  if (thetas.size() > 1) axis = "theta", n = thetas.size();
  if (chis.size() > 1) axis = "chi", n = chis.size();
  auto pick = [&](const std::vector<double>& v, std::size_t i) { return v.size() > 1 ? v[i] : v.front(); };

  std::optional<PureQubit> fixed;
  if (a.probe != "auto") {
    try {
      fixed = PureQubit::from_bloch(cli::parse_vec3(a.probe, "--probe"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--probe: ") + e.what());
    }
  }

  io::ResultTable t;
  t.config = resolved_config(sub);
  if (two)
    t.columns = {axis, "probe_x", "probe_y", "probe_z", "F_phiphi", "F_chichi", "F_chiphi", "Fp_phiphi", "Fp_chichi",
                 "massar_ratio", "rejected", "feasible", "divergent", "singular"};
  else
    t.columns = {axis, "probe_x", "probe_y", "probe_z", "F_phiphi", "qfi_phiphi", "ratio", "rejected", "feasible",
                 "divergent"};
  t.rows.resize(n);

  cli::parallel_for(n, a.out.threads, [&](std::size_t i) {
    const double theta = pick(thetas, i), phi = pick(phis, i), chi = pick(chis, i);
    const double x = axis == "theta" ? theta : axis == "chi" ? chi : phi;
    const DfpTable table = a.source.dfp(theta, i);
    const ChannelParams params(phi, chi, order);

    PureQubit probe = fixed.value_or(PureQubit::from_angles(0.0, 0.0));
    double rejected = 0.0;
    bool feasible = true;
    FisherMatrix f = two ? FisherMatrix({"phi", "chi"}) : FisherMatrix();
    if (!fixed) {
      SearchReport r;
      if (two) {
        auto tr = optimize_two_parameter(table, params, opts);
        r = tr;
      } else {
        r = optimize_single(table, params, opts);
      }
      probe = r.best_probe;
      rejected = static_cast<double>(r.rejected);
      f = r.fisher;
    } else if (!positivity_filter(evolved_coefficients(probe, params), table, opts.eps)) {
      feasible = false;
    } else if (two) {
      f = fisher_from_dfp(evolved_coefficients(probe, params), coefficient_derivatives(probe, params), table);
    } else {
      const std::array<CoefficientMap, 1> dc{coefficient_derivatives(probe, params).d_phi};
      f = fisher_from_dfp(evolved_coefficients(probe, params), dc, table);
    }
    const Vec3 r = probe.bloch();
    const FisherMatrix h = qfi_matrix(probe, params);
    if (!feasible) {
      t.rows[i] = two ? std::vector<double>{x, r.x, r.y, r.z, kNan, kNan, kNan, kNan, kNan, kNan, 0, 0, 0, 0}
                      : std::vector<double>{x, r.x, r.y, r.z, kNan, h(0, 0), kNan, 0, 0, 0};
      return;
    }
    const double div = f.divergent() ? 1.0 : 0.0;
    if (two) {
      const auto e = effective_fisher(f);
      double ratio = kNan;
      try {
        ratio = massar_ratio(f, h);
      } catch (const std::domain_error&) {
      }
      t.rows[i] = {x,          r.x,        r.y,   r.z,      f(0, 0), f(1, 1), f(0, 1), e.values[0], e.values[1],
                   ratio,      rejected,   1.0,   div,      e.singular ? 1.0 : 0.0};
    } else {
      const double hp = h(0, 0);
      t.rows[i] = {x, r.x, r.y, r.z, f(0, 0), hp, hp > 0.0 ? f(0, 0) / hp : kNan, rejected, 1.0, div};
    }
  });
  return t;
}

// ---------------------------------------------------------------------------
// optimize-probe

struct OptimizeProbe {
  Source source;
  ChannelArgs channel;
  SearchArgs search;
  Output out;
};

CLI::App* register_optimize_probe(CLI::App& app, OptimizeProbe& a) {
  auto* sub = app.add_subcommand("optimize-probe", "Local maxima of the information over probe states");
  a.source.add(sub, true);
  a.channel.add(sub, true);
  a.search.add(sub);
  add_output(sub, a.out);
  return sub;
}

io::ResultTable run_optimize_probe(OptimizeProbe& a, const CLI::App* sub) {
  a.source.prepare();
  const bool two = parse_params(a.channel.params);
  const auto opts = a.search.options();
  const double theta = cli::parse_double(a.channel.theta, "--theta");
  const ChannelParams params(cli::parse_double(a.channel.phi, "--phi"), cli::parse_double(a.channel.chi, "--chi"),
                             parse_order(a.channel.order));
  const DfpTable table = a.source.dfp(theta, 0);

  SearchReport report;
  if (two)
    report = optimize_two_parameter(table, params, opts);
  else
    report = optimize_single(table, params, opts);

  io::ResultTable t;
  t.config = resolved_config(sub);
  t.columns = {"rank", "polar", "azimuth", "probe_x", "probe_y", "probe_z", "value", "F_phiphi"};
  if (two) t.columns.insert(t.columns.end(), {"F_chichi", "F_chiphi", "Fp_phiphi", "Fp_chichi"});
  t.columns.insert(t.columns.end(), {"rejected", "grid_points", "evaluations", "non_identifiable"});

  std::vector<LocalMaximum> maxima = report.maxima;
  std::stable_sort(maxima.begin(), maxima.end(), [](const auto& l, const auto& r) { return l.value > r.value; });
  if (maxima.empty()) maxima.push_back({report.best_param, report.best_param, report.best_value, 0});
  for (std::size_t k = 0; k < maxima.size(); ++k) {
    const auto& m = maxima[k];
    const PureQubit q = m.param.state();
    const Vec3 r = q.bloch();
    std::vector<double> row{static_cast<double>(k + 1), m.param.polar, m.param.azimuth, r.x, r.y, r.z, m.value};
    if (two) {
      const auto pt = evaluate_two_parameter(table, q, params, opts.eps);
      row.insert(row.end(), {pt.fisher(0, 0), pt.fisher(1, 1), pt.fisher(0, 1), pt.effective.values.at(0),
                             pt.effective.values.at(1)});
    } else {
      row.push_back(evaluate_single(table, q, params, opts.eps).value);
    }
    row.insert(row.end(), {static_cast<double>(report.rejected),
                           static_cast<double>(report.grid_polar * report.grid_azimuth),
                           static_cast<double>(m.evaluations), report.non_identifiable ? 1.0 : 0.0});
    t.add_row(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// tomo-compare

struct TomoCompare {
  Source source;
  ChannelArgs channel;
  std::string probe = "0,1,0";
  Output out;
};

CLI::App* register_tomo_compare(CLI::App& app, TomoCompare& a) {
  auto* sub = app.add_subcommand("tomo-compare", "DFP-route against tomography-route Fisher information");
  a.source.add(sub, false, "--povm");
  a.channel.phi = "0:0.5:0.05";
  a.channel.params = "phi,chi";
  a.channel.add(sub, true);
  sub->add_option("--probe", a.probe, "Probe Bloch vector x,y,z");
  add_output(sub, a.out);
  return sub;
}

io::ResultTable run_tomo_compare(TomoCompare& a, const CLI::App* sub) {
  if (a.source.model.empty()) throw UsageError("--povm is required");
  const bool two = parse_params(a.channel.params);
  const auto order = parse_order(a.channel.order);
  const double theta = cli::parse_double(a.channel.theta, "--theta");
  const auto phis = cli::parse_range(a.channel.phi, "--phi");
  const auto chis = cli::parse_range(a.channel.chi, "--chi");
  if (phis.size() > 1 && chis.size() > 1) throw UsageError("only one of --phi, --chi may be a range");
  const bool chi_axis = chis.size() > 1;
  const std::size_t n = chi_axis ? chis.size() : phis.size();
  const PureQubit probe = PureQubit::from_bloch(cli::parse_vec3(a.probe, "--probe"));

  const Povm truth = a.source.povm(theta, a.source.seed);
  const DfpTable table = synth_dfp(truth, a.source.noise, a.source.seed);
  const auto rec = reconstruct_povm(table);

  io::ResultTable t;
  t.config = resolved_config(sub);
  t.config.emplace_back("reconstruction_residual", io::format_number(rec.residual));
  t.config.emplace_back("reconstruction_error", io::format_number(max_element_deviation(rec.povm, truth)));
  t.config.emplace_back("reconstruction_iterations", std::to_string(rec.iterations));
  t.columns = {chi_axis ? "chi" : "phi", "dfp_F_phiphi", "tomo_F_phiphi"};
  if (two) t.columns.insert(t.columns.end(), {"dfp_F_chichi", "tomo_F_chichi", "dfp_F_chiphi", "tomo_F_chiphi"});
  t.columns.push_back("max_rel_dev");
  t.rows.resize(n);

  cli::parallel_for(n, a.out.threads, [&](std::size_t i) {
    const double phi = phis.size() > 1 ? phis[i] : phis.front();
    const double chi = chis.size() > 1 ? chis[i] : chis.front();
    const ChannelParams params(phi, chi, order);
    const auto c = evolved_coefficients(probe, params);
    const auto dc = coefficient_derivatives(probe, params);
    std::vector<double> row{chi_axis ? chi : phi};
    if (!positivity_filter(c, table, 0.0)) {
      row.resize(t.columns.size(), kNan);
      t.rows[i] = std::move(row);
      return;
    }
    const FisherMatrix fd = fisher_from_dfp(c, dc, table);
    const FisherMatrix ft = fisher_from_povm(rec.povm, probe, params);
    auto rel = [](double x, double y) {
      const double s = std::max(std::abs(x), std::abs(y));
      return s > kProbabilityFloor ? std::abs(x - y) / s : 0.0;
    };
    double dev = rel(fd(0, 0), ft(0, 0));
    row.insert(row.end(), {fd(0, 0), ft(0, 0)});
    if (two) {
      row.insert(row.end(), {fd(1, 1), ft(1, 1), fd(0, 1), ft(0, 1)});
      dev = std::max(dev, rel(fd(1, 1), ft(1, 1)));
    }
    row.push_back(dev);
    t.rows[i] = std::move(row);
  });
  return t;
}

// ---------------------------------------------------------------------------
// synth-dfp

struct SynthDfp {
  Source source;
  double theta = 22.5;
  std::string out = "-";
};

int run_synth_dfp(SynthDfp& a, const CLI::App* sub) {
  if (a.source.model.empty()) throw UsageError("--model is required");
  const DfpTable table = synth_dfp(a.source.povm(a.theta, a.source.seed), a.source.noise, a.source.seed);
  std::string text;
  if (io::is_json_path(a.out)) {
    nlohmann::ordered_json doc;
    for (const auto& [k, v] : resolved_config(sub)) doc["config"][k] = v;
    doc["records"] = nlohmann::ordered_json::array();
    for (auto f : table.fiducials())
      for (std::size_t m = 0; m < table.outcome_count(); ++m)
        doc["records"].push_back({{"fiducial", label(f)}, {"outcome", table.outcomes()[m]}, {"probability", table(f, m)}});
    text = doc.dump(2) + "\n";
  } else {
    for (const auto& [k, v] : resolved_config(sub)) text += "# " + k + " = " + v + "\n";
    text += io::render_dfp_csv(table);
  }
  if (a.out == "-")
    std::cout << text;
  else
    io::write_atomic(a.out, text);
  return 0;
}

// ---------------------------------------------------------------------------
// wfh-scan and wfh-squeeze

struct WfhArgs {
  int n_bins = 4;
  double gamma = 1.0;
  double gamma_phase = 0.0;
  double phi = wfh::kDefaultPhi;
  double h = wfh::kDefaultStep;

  void add(CLI::App* sub) {
    sub->add_option("--n-bins", n_bins, "Bins per click detector");
    sub->add_option("--gamma", gamma, "Local-oscillator amplitude |gamma|");
    sub->add_option("--gamma-phase", gamma_phase, "Local-oscillator phase in radians");
    sub->add_option("--phi", phi, "Phase at which the information is evaluated");
    sub->add_option("--step", h, "Finite-difference step");
  }
  wfh::Detector detector() const { return {std::polar(gamma, gamma_phase), n_bins}; }
};

struct WfhScan {
  WfhArgs wfh;
  std::string alpha = "0:2:0.02";
  Output out;
};

io::ResultTable run_wfh_scan(WfhScan& a, const CLI::App* sub) {
  const auto alphas = cli::parse_range(a.alpha, "--alpha");
  const wfh::Model model(a.wfh.detector());
  const auto outcomes = wfh::all_outcomes(model.detector());
  io::ResultTable t;
  t.config = resolved_config(sub);
  t.columns = {"alpha"};
  for (auto x : outcomes) t.columns.push_back("F_" + std::to_string(x.x1) + "_" + std::to_string(x.x2));
  t.columns.insert(t.columns.end(), {"total", "below_floor"});
  t.rows.resize(alphas.size());
  cli::parallel_for(alphas.size(), a.out.threads, [&](std::size_t i) {
    const auto b = wfh::total_fisher(model, cplx{alphas[i], 0.0}, a.wfh.phi, a.wfh.h);
    std::vector<double> row{alphas[i]};
    for (const auto& f : b.outcomes) row.push_back(f.value);
    row.insert(row.end(), {b.total, static_cast<double>(b.below_floor)});
    t.rows[i] = std::move(row);
  });
  return t;
}

struct WfhSqueeze {
  WfhArgs wfh;
  double energy = 1.0;
  std::string alpha;
  std::string rd = "1,0.95,0.9";
  Output out;
};

io::ResultTable run_wfh_squeeze(WfhSqueeze& a, const CLI::App* sub) {
  const auto rds = cli::parse_range(a.rd, "--rd");
  const auto alphas = a.alpha.empty() ? std::vector<double>{std::sqrt(a.energy)} : cli::parse_range(a.alpha, "--alpha");
  for (double x : alphas)
    if (!(x > 0.0)) throw UsageError("--alpha values must be positive");
  const wfh::Model model(a.wfh.detector());
  io::ResultTable t;
  t.config = resolved_config(sub);
  t.columns = {"alpha", "energy"};
  for (double r : rds) {
    const std::string tag = io::format_number(r);
    t.columns.insert(t.columns.end(), {"s_rd" + tag, "F_rd" + tag});
  }
  t.columns.insert(t.columns.end(), {"max_photon_residual", "below_floor"});
  t.rows.resize(alphas.size());
  cli::parallel_for(alphas.size(), a.out.threads, [&](std::size_t i) {
    const double e = alphas[i] * alphas[i];
    std::vector<double> row{alphas[i], e};
    double residual = 0.0;
    std::size_t floored = 0;
    for (double r : rds) {
      const auto pt = wfh::squeeze_tradeoff_point(model, e, r, a.wfh.phi, a.wfh.h);
      row.insert(row.end(), {pt.s, pt.fisher});
      residual = std::max(residual, std::abs(pt.mean_photon - e));
      floored += pt.below_floor;
    }
    row.insert(row.end(), {residual, static_cast<double>(floored)});
    t.rows[i] = std::move(row);
  });
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher information from detector data fitting patterns"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  FisherScan fisher_scan;
  OptimizeProbe optimize_probe;
  TomoCompare tomo_compare;
  SynthDfp synth;
  WfhScan wfh_scan;
  WfhSqueeze wfh_squeeze;

  auto* fs = register_fisher_scan(app, fisher_scan);
  auto* op = register_optimize_probe(app, optimize_probe);
  auto* tc = register_tomo_compare(app, tomo_compare);

  auto* sd = app.add_subcommand("synth-dfp", "Synthetic DFP table from a detector model");
  synth.source.add(sd, false);
  sd->add_option("--theta", synth.theta, "Waveplate angle in degrees");
  sd->add_option("-o,--out", synth.out, "Output file (.csv or .json); '-' for stdout");

  auto* ws = app.add_subcommand("wfh-scan", "Per-outcome phase information over coherent amplitudes");
  wfh_scan.wfh.add(ws);
  ws->add_option("--alpha", wfh_scan.alpha, "Coherent amplitudes (a:b:c or list)");
  add_output(ws, wfh_scan.out);

  auto* wq = app.add_subcommand("wfh-squeeze", "Phase information of displaced squeezed probes at fixed energy");
  wfh_squeeze.wfh.add(wq);
  wq->add_option("--energy", wfh_squeeze.energy, "Probe energy when --alpha is not given");
  wq->add_option("--alpha", wfh_squeeze.alpha, "Probe sizes alpha, energy alpha^2 (a:b:c or list)");
  wq->add_option("--rd", wfh_squeeze.rd, "Displacement fractions r_d in (0, 1]");
  add_output(wq, wfh_squeeze.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (fs->parsed()) emit(run_fisher_scan(fisher_scan, fs), fisher_scan.out);
    if (op->parsed()) emit(run_optimize_probe(optimize_probe, op), optimize_probe.out);
    if (tc->parsed()) {
      const auto t = run_tomo_compare(tomo_compare, tc);
      emit(t, tomo_compare.out);
    }
    if (sd->parsed()) run_synth_dfp(synth, sd);
    if (ws->parsed()) emit(run_wfh_scan(wfh_scan, ws), wfh_scan.out);
    if (wq->parsed()) emit(run_wfh_squeeze(wfh_squeeze, wq), wfh_squeeze.out);
  } catch (const NoFeasibleProbe& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
