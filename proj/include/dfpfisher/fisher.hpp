// dfpfisher/fisher.hpp
//
// Classical Fisher information from outcome probabilities, and the same
// quantity assembled directly from a detector's data fitting patterns (DFPs):
// the table q_alpha(m) of outcome probabilities measured on the fiducials.
// Since p(m) = sum_alpha C_alpha q_alpha(m) is linear in the fiducial
// coefficients, so are its parameter derivatives, and no POVM is needed.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dfpfisher/fisher_matrix.hpp"
#include "dfpfisher/qubit.hpp"

namespace dfpfisher {

/// Probabilities (and derivatives) below this magnitude are treated as zero.
inline constexpr double kProbabilityFloor = 1e-12;

/// Relative determinant below which a non-diagonal 2x2 information matrix is
/// reported singular: det <= kSingularRelTol * F_00 * F_11.
inline constexpr double kSingularRelTol = 1e-10;

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Outcome probabilities of each fiducial. Rows are indexed by position in
/// `fiducials()`, columns by outcome.
class DfpTable {
 public:
  DfpTable(std::vector<Fiducial> fiducials, std::vector<std::string> outcomes,
           std::vector<std::vector<double>> q, double row_tolerance = 1e-6)
      : fiducials_(std::move(fiducials)), outcomes_(std::move(outcomes)), q_(std::move(q)) {
    if (outcomes_.size() < 2) throw std::invalid_argument("DfpTable: need at least two outcomes");
    if (fiducials_.empty()) throw std::invalid_argument("DfpTable: no fiducials");
    if (q_.size() != fiducials_.size())
      throw std::invalid_argument("DfpTable: row count does not match fiducial count");
    row_of_.fill(-1);
    for (std::size_t r = 0; r < fiducials_.size(); ++r) {
      auto& slot = row_of_[index(fiducials_[r])];
      if (slot >= 0) throw std::invalid_argument("DfpTable: duplicate fiducial " + std::string(label(fiducials_[r])));
      slot = static_cast<int>(r);
    }
    residuals_.resize(q_.size());
    for (std::size_t r = 0; r < q_.size(); ++r) {
      if (q_[r].size() != outcomes_.size())
        throw std::invalid_argument("DfpTable: row width does not match outcome count");
      double sum = 0.0;
      for (double v : q_[r]) {
        if (!std::isfinite(v)) throw std::invalid_argument("DfpTable: non-finite entry");
        sum += v;
      }
      residuals_[r] = sum - 1.0;
      if (std::abs(residuals_[r]) > row_tolerance)
        throw std::invalid_argument("DfpTable: row " + std::string(label(fiducials_[r])) +
                                    " is not normalised (sum - 1 = " + std::to_string(residuals_[r]) + ")");
    }
    raw_ = q_;
  }

  /// All six Pauli eigenstates, in H V D A R L order.
  static std::vector<Fiducial> pauli_fiducials() { return {kFiducials.begin(), kFiducials.end()}; }

  const std::vector<Fiducial>& fiducials() const { return fiducials_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  std::size_t outcome_count() const { return outcomes_.size(); }

  bool has(Fiducial f) const { return row_of_[index(f)] >= 0; }
  const std::vector<double>& row(Fiducial f) const {
    if (!has(f)) throw std::out_of_range("DfpTable: no row for fiducial " + std::string(label(f)));
    return q_[static_cast<std::size_t>(row_of_[index(f)])];
  }
  double operator()(Fiducial f, std::size_t m) const { return row(f).at(m); }

  /// Entries as they were before any clamping (audit trail).
  const std::vector<std::vector<double>>& raw() const { return raw_; }
  /// Row sum minus one of the raw entries, per row.
  const std::vector<double>& residuals() const { return residuals_; }

  /// Negative entries set to zero, then each row rescaled to sum to one.
  /// The raw entries and residuals of this table are carried along.
  DfpTable clamped() const {
    DfpTable out = *this;
    for (auto& r : out.q_) {
      double sum = 0.0;
      for (double& v : r) {
        v = std::max(v, 0.0);
        sum += v;
      }
      if (!(sum > 0.0)) throw std::invalid_argument("DfpTable: row vanishes after clamping");
      for (double& v : r) v /= sum;
    }
    return out;
  }

  /// Coarse-grained table with outcome columns i and j merged into i.
  DfpTable merged(std::size_t i, std::size_t j) const {
    if (i == j || i >= outcome_count() || j >= outcome_count() || outcome_count() < 3)
      throw std::invalid_argument("DfpTable::merged: invalid outcome pair");
    auto outcomes = outcomes_;
    auto q = q_;
    outcomes[i] += "+" + outcomes[j];
    outcomes.erase(outcomes.begin() + static_cast<std::ptrdiff_t>(j));
    for (auto& r : q) {
      r[i] += r[j];
      r.erase(r.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return DfpTable(fiducials_, std::move(outcomes), std::move(q), std::numeric_limits<double>::infinity());
  }

 private:
  std::vector<Fiducial> fiducials_;
  std::vector<std::string> outcomes_;
  std::vector<std::vector<double>> q_;
  std::vector<std::vector<double>> raw_;
  std::vector<double> residuals_;
  std::array<int, 6> row_of_{};
};

/// p(m) and d_i p(m), one derivative vector per parameter.
struct ProbabilityVector {
  std::vector<double> p;
  std::vector<std::vector<double>> dp;
};

namespace detail {

/// sum_alpha w_alpha q_alpha(m). Throws if a fiducial carrying weight is
/// missing from the table.
inline std::vector<double> contract(const CoefficientMap& w, const DfpTable& table) {
  std::vector<double> out(table.outcome_count(), 0.0);
  for (auto f : kFiducials) {
    const double c = w[index(f)];
    if (!table.has(f)) {
      if (c != 0.0)
        throw std::invalid_argument("label mismatch: coefficient on fiducial " + std::string(label(f)) +
                                    " but the table has no such row");
      continue;
    }
    const auto& row = table.row(f);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += c * row[m];
  }
  return out;
}

inline std::vector<std::string> default_labels(std::size_t d) {
  if (d == 1) return {"phi"};
  if (d == 2) return {"phi", "chi"};
  throw std::invalid_argument("Fisher information: 1 or 2 parameters supported");
}

/// F_ij = sum_m dp_i dp_j / p with the probability-floor rule.
inline FisherMatrix accumulate(const std::vector<double>& p, const std::vector<std::vector<double>>& dp,
                               std::vector<std::string> labels) {
  FisherMatrix f(std::move(labels));
  const std::size_t d = f.dim();
  std::vector<double> acc(d * d, 0.0);
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] < kProbabilityFloor) {
      for (std::size_t i = 0; i < d; ++i)
        if (std::abs(dp[i][m]) >= kProbabilityFloor) f.mark_divergent();
      continue;
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) acc[i * d + j] += dp[i][m] * dp[j][m] / p[m];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) f.set(i, j, acc[i * d + j]);
  return f;
}

}  // namespace detail

/// p(m) = sum_alpha C_alpha q_alpha(m).
inline std::vector<double> predict_probabilities(const CoefficientMap& c, const DfpTable& table) {
  return detail::contract(c, table);
}

/// True iff every predicted probability is at least `eps`. Values within the
/// probability floor below `eps` are accepted as rounding.
inline bool positivity_filter(const CoefficientMap& c, const DfpTable& table, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("positivity_filter: eps must be >= 0");
  const auto p = predict_probabilities(c, table);
  return std::all_of(p.begin(), p.end(), [&](double v) { return v >= eps - kProbabilityFloor; });
}

inline FisherMatrix fisher_from_probabilities(const ProbabilityVector& pv, std::vector<std::string> labels = {}) {
  const std::size_t d = pv.dp.size();
  if (labels.empty()) labels = detail::default_labels(d);
  if (labels.size() != d) throw std::invalid_argument("fisher_from_probabilities: label count mismatch");
  double sum = 0.0;
  for (double v : pv.p) {
    if (!std::isfinite(v) || v < -kProbabilityFloor)
      throw std::invalid_argument("fisher_from_probabilities: negative or non-finite probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("fisher_from_probabilities: probabilities do not sum to 1");
  for (const auto& row : pv.dp) {
    if (row.size() != pv.p.size()) throw std::invalid_argument("fisher_from_probabilities: derivative size mismatch");
    double s = 0.0;
    for (double v : row) s += v;
    if (std::abs(s) > 1e-9) throw std::invalid_argument("fisher_from_probabilities: derivatives do not sum to 0");
  }
  return detail::accumulate(pv.p, pv.dp, std::move(labels));
}

/// Information assembled from the DFPs: numerator sum_alpha d_i C_alpha q_alpha(m),
/// denominator sum_alpha C_alpha q_alpha(m).
inline FisherMatrix fisher_from_dfp(const CoefficientMap& c, std::span<const CoefficientMap> dc,
                                    const DfpTable& table, std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = detail::default_labels(dc.size());
  if (labels.size() != dc.size()) throw std::invalid_argument("fisher_from_dfp: label count mismatch");
  if (!positivity_filter(c, table, 0.0))
    throw PreconditionError("fisher_from_dfp: predicted probabilities are negative");
  const auto p = predict_probabilities(c, table);
  std::vector<std::vector<double>> dp;
  dp.reserve(dc.size());
  for (const auto& d : dc) dp.push_back(detail::contract(d, table));
  return detail::accumulate(p, dp, std::move(labels));
}

/// Two-parameter convenience over the channel derivatives.
inline FisherMatrix fisher_from_dfp(const CoefficientMap& c, const CoefficientDerivatives& dc, const DfpTable& table) {
  const std::array<CoefficientMap, 2> d{dc.d_phi, dc.d_chi};
  return fisher_from_dfp(c, d, table);
}

struct EffectiveFisher {
  /// F'_ii = 1 / (F^-1)_ii. NaN where undefined.
  std::vector<double> values;
  bool singular = false;
};

inline EffectiveFisher effective_fisher(const FisherMatrix& f) {
  EffectiveFisher out;
  if (f.dim() == 1) {
    out.values = {f(0, 0)};
    return out;
  }
  if (f.is_diagonal()) {
    out.values = {f(0, 0), f(1, 1)};
    return out;
  }
  const double a = f(0, 0), b = f(0, 1), d = f(1, 1);
  const double det = f.determinant();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (det <= kSingularRelTol * a * d) {
    out.singular = true;
    out.values = {d > kProbabilityFloor ? det / d : nan, a > kProbabilityFloor ? det / a : nan};
    return out;
  }
  out.values = {a - b * b / d, d - b * b / a};
  return out;
}

/// F_phiphi / H_phiphi + F_chichi / H_chichi on the raw diagonals.
inline double massar_ratio(const FisherMatrix& f, const FisherMatrix& h) {
  if (f.dim() != 2 || h.dim() != 2) throw std::invalid_argument("massar_ratio: two-parameter matrices required");
  if (!(h(0, 0) > 0.0) || !(h(1, 1) > 0.0)) throw std::domain_error("massar_ratio: zero quantum Fisher information");
  return f(0, 0) / h(0, 0) + f(1, 1) / h(1, 1);
}

}  // namespace dfpfisher
