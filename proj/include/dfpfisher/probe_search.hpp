// dfpfisher/probe_search.hpp
//
// Maximisation of the DFP Fisher information over pure probe states. Pure
// states are extremal, so the search runs over the Bloch sphere in spherical
// coordinates: an exhaustive grid first (to enumerate feasible basins), then
// derivative-free simplex refinement from the best few grid maxima.
//
// Probes whose predicted probabilities fail the positivity filter are never
// reported: noisy DFPs can produce unphysical maxima there.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfpfisher/fisher.hpp"
#include "dfpfisher/qubit.hpp"

namespace dfpfisher {

class NoFeasibleProbe : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProbeParam {
  double polar = 0.0;    ///< [0, pi]
  double azimuth = 0.0;  ///< [0, 2 pi)

  PureQubit state() const { return PureQubit::from_angles(polar, azimuth); }

  /// Canonical angles of any pure state.
  static ProbeParam of(const PureQubit& q) {
    const Vec3 r = q.bloch();
    double az = std::atan2(r.y, r.x);
    if (az < 0.0) az += 2.0 * std::numbers::pi;
    return {std::acos(std::clamp(r.z, -1.0, 1.0)), az};
  }
};

enum class Scalarization { Sum, Min, PhiOnly, ChiOnly };

struct SearchOptions {
  double grid_step_deg = 2.0;
  /// Number of grid maxima refined.
  std::size_t starts = 3;
  int max_evaluations_per_start = 4000;
  double eps = 0.0;
  Scalarization scalarization = Scalarization::Sum;
};

/// Result of one objective evaluation. Infeasible probes carry no value.
struct ProbeEvaluation {
  bool feasible = false;
  double value = 0.0;
};

using ProbeObjective = std::function<ProbeEvaluation(const PureQubit&)>;

struct LocalMaximum {
  ProbeParam start;
  ProbeParam param;
  double value = 0.0;
  int evaluations = 0;
};

struct GridSample {
  ProbeParam param;
  ProbeEvaluation eval;
};

/// Objective-agnostic outcome of the grid + refinement search.
struct SearchOutcome {
  ProbeParam best;
  double best_value = 0.0;
  double best_grid_value = 0.0;
  std::size_t grid_polar = 0;
  std::size_t grid_azimuth = 0;
  /// Grid points that were infeasible or had no finite objective.
  std::size_t rejected = 0;
  int refinement_evaluations = 0;
  bool non_identifiable = false;
  std::vector<LocalMaximum> maxima;
  std::vector<GridSample> grid;
};

/// Values at or below this are treated as "no information".
inline constexpr double kIdentifiabilityFloor = 1e-12;

namespace detail {

inline ProbeParam wrap(ProbeParam p) { return ProbeParam::of(p.state()); }

/// Nelder-Mead on (polar, azimuth), maximising. Infeasible points rank below
/// every feasible one. Returns the best feasible point visited.
inline LocalMaximum refine(const ProbeObjective& objective, ProbeParam start, double start_value, double step,
                           int max_evaluations) {
  using Point = std::array<double, 2>;
  constexpr double kWorst = -std::numeric_limits<double>::infinity();
  LocalMaximum best{start, start, start_value, 0};

  auto f = [&](const Point& x) {
    ++best.evaluations;
    const ProbeParam p = wrap({x[0], x[1]});
    const auto e = objective(p.state());
    if (!e.feasible || !std::isfinite(e.value)) return kWorst;
    if (e.value > best.value) {
      best.value = e.value;
      best.param = p;
    }
    return e.value;
  };

  std::array<Point, 3> x{Point{start.polar, start.azimuth}, Point{start.polar + 0.5 * step, start.azimuth},
                         Point{start.polar, start.azimuth + 0.5 * step}};
  std::array<double, 3> fx{start_value, f(x[1]), f(x[2])};

  while (best.evaluations < max_evaluations) {
    // order descending by value (best first)
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] > fx[b]; });
    const Point xb = x[order[0]], xm = x[order[1]], xw = x[order[2]];
    const double fb = fx[order[0]], fm = fx[order[1]], fw = fx[order[2]];

    const double size = std::max(std::hypot(xm[0] - xb[0], xm[1] - xb[1]), std::hypot(xw[0] - xb[0], xw[1] - xb[1]));
    if (size < 1e-10) break;
    if (std::isfinite(fw) && fb - fw <= 1e-14 * (1.0 + std::abs(fb)) && size < 1e-6) break;

    const Point c{0.5 * (xb[0] + xm[0]), 0.5 * (xb[1] + xm[1])};
    auto along = [&](double t) { return Point{c[0] + t * (xw[0] - c[0]), c[1] + t * (xw[1] - c[1])}; };

    const Point xr = along(-1.0);
    const double fr = f(xr);
    Point accept = xw;
    double faccept = fw;
    bool shrink = false;
    if (fr > fb) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      accept = fe > fr ? xe : xr;
      faccept = std::max(fe, fr);
    } else if (fr > fm) {
      accept = xr;
      faccept = fr;
    } else {
      const Point xc = fr > fw ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      if (fc > std::max(fr, fw)) {
        accept = xc;
        faccept = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      x = {xb, Point{0.5 * (xb[0] + xm[0]), 0.5 * (xb[1] + xm[1])}, Point{0.5 * (xb[0] + xw[0]), 0.5 * (xb[1] + xw[1])}};
      fx = {fb, f(x[1]), f(x[2])};
    } else {
      x = {xb, xm, accept};
      fx = {fb, fm, faccept};
    }
  }
  return best;
}

}  // namespace detail

/// Grid enumeration followed by multi-start refinement. Throws
/// NoFeasibleProbe if every grid point is rejected.
inline SearchOutcome search_probes(const ProbeObjective& objective, const SearchOptions& opts = {}) {
  if (!(opts.grid_step_deg > 0.0) || opts.grid_step_deg > 90.0)
    throw std::invalid_argument("search_probes: grid step must be in (0, 90] degrees");
  const double step = opts.grid_step_deg * std::numbers::pi / 180.0;
  SearchOutcome out;
  out.grid_polar = static_cast<std::size_t>(std::lround(180.0 / opts.grid_step_deg)) + 1;
  out.grid_azimuth = static_cast<std::size_t>(std::lround(360.0 / opts.grid_step_deg));
  const std::size_t np = out.grid_polar, na = out.grid_azimuth;

  out.grid.resize(np * na);
  for (std::size_t i = 0; i < np; ++i) {
    const double polar = std::min(static_cast<double>(i) * step, std::numbers::pi);
    for (std::size_t j = 0; j < na; ++j) {
      const ProbeParam p{polar, static_cast<double>(j) * step};
      auto e = objective(p.state());
      if (e.feasible && !std::isfinite(e.value)) e.feasible = false;
      if (!e.feasible) ++out.rejected;
      out.grid[i * na + j] = {p, e};
    }
  }

  auto at = [&](std::size_t i, std::size_t j) -> const ProbeEvaluation& { return out.grid[i * na + j].eval; };

  // Grid local maxima (8-neighbourhood, periodic in azimuth).
  std::vector<std::size_t> peaks;
  double best_grid = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const auto& e = at(i, j);
      if (!e.feasible) continue;
      best_grid = std::max(best_grid, e.value);
      bool peak = true;
      for (int di = -1; di <= 1 && peak; ++di)
        for (int dj = -1; dj <= 1 && peak; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long ii = static_cast<long>(i) + di;
          if (ii < 0 || ii >= static_cast<long>(np)) continue;
          const auto jj = static_cast<std::size_t>(static_cast<long>(j + na) + dj) % na;
          const auto& n = at(static_cast<std::size_t>(ii), jj);
          if (n.feasible && n.value > e.value) peak = false;
        }
      if (peak) peaks.push_back(i * na + j);
    }
  if (peaks.empty()) throw NoFeasibleProbe("no probe on the search grid passes the positivity filter");

  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return out.grid[a].eval.value > out.grid[b].eval.value; });
  out.best_grid_value = best_grid;
  out.best = out.grid[peaks.front()].param;
  out.best_value = best_grid;

  if (best_grid <= kIdentifiabilityFloor) {
    out.non_identifiable = true;
    out.best_value = std::max(best_grid, 0.0);
    return out;
  }

  const std::size_t starts = std::min(opts.starts, peaks.size());
  for (std::size_t k = 0; k < starts; ++k) {
    const auto& s = out.grid[peaks[k]];
    auto m = detail::refine(objective, s.param, s.eval.value, step, opts.max_evaluations_per_start);
    out.refinement_evaluations += m.evaluations;
    if (m.value > out.best_value) {
      out.best_value = m.value;
      out.best = m.param;
    }
    out.maxima.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fisher-information objectives

struct TwoParameterPoint {
  FisherMatrix fisher{std::vector<std::string>{"phi", "chi"}};
  EffectiveFisher effective;
  bool feasible = false;
};

/// Full 2x2 DFP information at one probe; infeasible if the positivity
/// filter fails or the information diverges.
inline TwoParameterPoint evaluate_two_parameter(const DfpTable& table, const PureQubit& probe,
                                                const ChannelParams& params, double eps = 0.0) {
  TwoParameterPoint pt;
  const auto c = evolved_coefficients(probe, params);
  if (!positivity_filter(c, table, eps)) return pt;
  pt.fisher = fisher_from_dfp(c, coefficient_derivatives(probe, params), table);
  if (pt.fisher.divergent()) return pt;
  pt.feasible = true;
  pt.effective = effective_fisher(pt.fisher);
  return pt;
}

/// F_phiphi alone (single-parameter problem); infeasible as above.
inline ProbeEvaluation evaluate_single(const DfpTable& table, const PureQubit& probe, const ChannelParams& params,
                                       double eps = 0.0) {
  const auto c = evolved_coefficients(probe, params);
  if (!positivity_filter(c, table, eps)) return {};
  const std::array<CoefficientMap, 1> dc{coefficient_derivatives(probe, params).d_phi};
  const auto f = fisher_from_dfp(c, dc, table);
  if (f.divergent()) return {};
  return {true, f(0, 0)};
}

inline double scalarize(const EffectiveFisher& e, Scalarization s) {
  const double a = e.values.at(0), b = e.values.at(1);
  switch (s) {
    case Scalarization::Sum: return a + b;
    case Scalarization::Min: return std::min(a, b);
    case Scalarization::PhiOnly: return a;
    case Scalarization::ChiOnly: return b;
  }
  return a + b;
}

struct SearchReport {
  PureQubit best_probe = PureQubit::from_angles(0.0, 0.0);
  ProbeParam best_param;
  double best_value = 0.0;
  FisherMatrix fisher;
  std::size_t rejected = 0;
  std::size_t grid_polar = 0;
  std::size_t grid_azimuth = 0;
  int refinement_evaluations = 0;
  bool non_identifiable = false;
  std::vector<LocalMaximum> maxima;
};

struct TwoParameterScanEntry {
  ProbeParam param;
  TwoParameterPoint point;
};

struct TwoParameterReport : SearchReport {
  EffectiveFisher effective;
  /// Every grid probe with its information matrix, for export.
  std::vector<TwoParameterScanEntry> scan;
};

namespace detail {
inline void fill_report(SearchReport& r, const SearchOutcome& o) {
  r.best_param = o.best;
  r.best_probe = o.best.state();
  r.best_value = o.best_value;
  r.rejected = o.rejected;
  r.grid_polar = o.grid_polar;
  r.grid_azimuth = o.grid_azimuth;
  r.refinement_evaluations = o.refinement_evaluations;
  r.non_identifiable = o.non_identifiable;
  r.maxima = o.maxima;
}
}  // namespace detail

/// Maximise F_phiphi over probes, at the evaluation point `params`
/// (typically a small phase, phi ~ 0).
inline SearchReport optimize_single(const DfpTable& table, const ChannelParams& params, const SearchOptions& opts = {}) {
  const auto outcome = search_probes(
      [&](const PureQubit& q) { return evaluate_single(table, q, params, opts.eps); }, opts);
  SearchReport r;
  detail::fill_report(r, outcome);
  const auto c = evolved_coefficients(r.best_probe, params);
  const std::array<CoefficientMap, 1> dc{coefficient_derivatives(r.best_probe, params).d_phi};
  r.fisher = fisher_from_dfp(c, dc, table);
  return r;
}

/// Two-parameter search on the effective information F'_phiphi, F'_chichi,
/// combined by `opts.scalarization`. The full grid scan is retained.
inline TwoParameterReport optimize_two_parameter(const DfpTable& table, const ChannelParams& params,
                                                 const SearchOptions& opts = {}) {
  if (table.outcome_count() < 3)
    throw std::invalid_argument("optimize_two_parameter: a binary measurement cannot resolve two parameters");
  const auto outcome = search_probes(
      [&](const PureQubit& q) -> ProbeEvaluation {
        const auto pt = evaluate_two_parameter(table, q, params, opts.eps);
        if (!pt.feasible) return {};
        const double v = scalarize(pt.effective, opts.scalarization);
        if (!std::isfinite(v)) return {};
        return {true, v};
      },
      opts);
  TwoParameterReport r;
  detail::fill_report(r, outcome);
  const auto best = evaluate_two_parameter(table, r.best_probe, params, opts.eps);
  r.fisher = best.fisher;
  r.effective = best.effective;
  r.scan.reserve(outcome.grid.size());
  for (const auto& g : outcome.grid)
    r.scan.push_back({g.param, evaluate_two_parameter(table, g.param.state(), params, opts.eps)});
  return r;
}

}  // namespace dfpfisher
