// dfpfisher/tomo.hpp
//
// Qubit POVMs, the detector models used for synthetic data, and the baseline
// route through detector tomography: reconstruct the POVM from the DFP table,
// then predict the Fisher information from Born's rule.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dfpfisher/fisher.hpp"
#include "dfpfisher/linalg.hpp"
#include "dfpfisher/qubit.hpp"

namespace dfpfisher {

class Povm {
 public:
  Povm(std::vector<Mat2> elements, std::vector<std::string> labels) : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.size() < 2) throw std::invalid_argument("Povm: need at least two outcomes");
    if (labels_.size() != elements_.size()) throw std::invalid_argument("Povm: label count mismatch");
    Mat2 sum;
    for (const auto& e : elements_) {
      if (!is_hermitian(e, 1e-10)) throw std::invalid_argument("Povm: element is not Hermitian");
      if (min_eigenvalue(e) < -1e-9) throw std::invalid_argument("Povm: element is not positive");
      sum += e;
    }
    if (max_abs_diff(sum, Mat2::identity()) > 1e-9) throw std::invalid_argument("Povm: elements do not sum to identity");
  }

  std::size_t size() const { return elements_.size(); }
  const std::vector<Mat2>& elements() const { return elements_; }
  const Mat2& operator[](std::size_t m) const { return elements_.at(m); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Mat2> elements_;
  std::vector<std::string> labels_;
};

inline double born(const Mat2& element, Vec3 r) {
  const auto c = pauli_coords(element);
  return 0.5 * (c.a0 + dot(c.a, r));
}

inline double max_element_deviation(const Povm& a, const Povm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_element_deviation: outcome count mismatch");
  double d = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) d = std::max(d, max_abs_diff(a[m], b[m]));
  return d;
}

// ---------------------------------------------------------------------------
// Detector models

/// Two-outcome projective measurement along the unit Bloch axis n.
inline Povm projective_povm(Vec3 n, std::string plus = "+", std::string minus = "-") {
  return Povm({from_pauli_coords({1.0, n}), from_pauli_coords({1.0, -1.0 * n})}, {std::move(plus), std::move(minus)});
}

inline Povm hv_povm() { return projective_povm({0, 0, 1}, "H", "V"); }
inline Povm da_povm() { return projective_povm({1, 0, 0}, "D", "A"); }

/// Half-wave plate at angle theta (radians) followed by a polarising beam
/// splitter: Pi_0 = W^dag |H><H| W with W = [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
inline Povm waveplate_povm(double theta) {
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  Mat2 w{{cplx{c}, cplx{s}, cplx{s}, cplx{-c}}};
  Mat2 h;
  h(0, 0) = 1.0;
  const Mat2 pi0 = adjoint(w) * h * w;
  return Povm({pi0, Mat2::identity() - pi0}, {"T", "R"});
}

/// Beam splitter with polarisation-dependent transmission T = diag(t_h, t_v);
/// the transmitted arm is measured in H/V, the reflected arm in D/A.
inline Povm zx_povm(double t_h = 0.5, double t_v = 0.5) {
  if (!(t_h >= 0.0 && t_h <= 1.0 && t_v >= 0.0 && t_v <= 1.0))
    throw std::invalid_argument("zx_povm: transmissions must lie in [0, 1]");
  Mat2 r_sqrt;
  r_sqrt(0, 0) = std::sqrt(1.0 - t_h);
  r_sqrt(1, 1) = std::sqrt(1.0 - t_v);
  const Mat2 d = density_of(Vec3{1, 0, 0}).matrix();
  const Mat2 a = density_of(Vec3{-1, 0, 0}).matrix();
  Mat2 zp, zm;
  zp(0, 0) = t_h;
  zm(1, 1) = t_v;
  return Povm({zp, zm, r_sqrt * d * r_sqrt, r_sqrt * a * r_sqrt}, {"Z+", "Z-", "X+", "X-"});
}

/// S^{-1/2} A_m S^{-1/2} with S = sum_m A_m; A_m random rank-1 (projective
/// mixture) or full-rank Ginibre products.
inline Povm random_povm(std::size_t outcomes, std::mt19937_64& rng, bool rank_one = false) {
  if (outcomes < 2) throw std::invalid_argument("random_povm: need at least two outcomes");
  std::normal_distribution<double> g;
  std::vector<Mat2> a(outcomes);
  Mat2 s;
  for (auto& e : a) {
    Mat2 m;
    for (auto& v : m.m) v = cplx{g(rng), g(rng)};
    if (rank_one) m(1, 0) = m(1, 1) = 0.0;  // m^dag m = |v><v|
    e = adjoint(m) * m;
    s += e;
  }
  const Mat2 s_inv_sqrt = apply_spectral(s, [](double l) { return 1.0 / std::sqrt(l); });
  std::vector<std::string> labels;
  for (auto& e : a) {
    e = s_inv_sqrt * e * s_inv_sqrt;
    e = 0.5 * (e + adjoint(e));
    labels.push_back("m" + std::to_string(labels.size()));
  }
  return Povm(std::move(a), std::move(labels));
}

// ---------------------------------------------------------------------------
// Synthetic data

/// Born-rule DFPs on the six Pauli fiducials, with optional additive Gaussian
/// noise; rows are clamped and renormalised as on load.
inline DfpTable synth_dfp(const Povm& povm, double noise_sigma = 0.0, std::uint64_t seed = 0) {
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("synth_dfp: noise_sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> q;
  for (auto f : kFiducials) {
    std::vector<double> row;
    for (const auto& e : povm.elements()) {
      double v = born(e, fiducial_bloch(f));
      if (noise_sigma > 0.0) v += noise_sigma * noise(rng);
      row.push_back(v);
    }
    q.push_back(std::move(row));
  }
  return DfpTable(DfpTable::pauli_fiducials(), povm.labels(), std::move(q), std::numeric_limits<double>::infinity())
      .clamped();
}

// ---------------------------------------------------------------------------
// Reconstruction

struct ReconstructionOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;
};

struct Reconstruction {
  Povm povm;
  /// sum_{alpha,m} (Tr(Pi_m rho_alpha) - q_alpha(m))^2
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline double least_squares_residual(const std::vector<Mat2>& elements, const DfpTable& table) {
  double r = 0.0;
  for (auto f : table.fiducials())
    for (std::size_t m = 0; m < elements.size(); ++m) {
      const double d = born(elements[m], fiducial_bloch(f)) - table(f, m);
      r += d * d;
    }
  return r;
}

/// Unconstrained least-squares fit followed by alternating projection between
/// the completeness constraint (affine) and the positive cone (eigenvalue
/// clipping). Every iterate is mapped to a valid POVM by the symmetric rescale
/// S^{-1/2} Pi_m S^{-1/2}, and the one with the smallest residual is returned.
inline Reconstruction reconstruct_povm(const DfpTable& table, const ReconstructionOptions& opts = {}) {
  for (auto f : kFiducials)
    if (!table.has(f)) throw std::invalid_argument("reconstruct_povm: all six Pauli fiducials are required");

  const std::size_t n = table.outcome_count();
  std::vector<Mat2> pi(n);
  for (std::size_t m = 0; m < n; ++m) {
    PauliCoords c;
    for (std::size_t k = 0; k < kFiducials.size(); k += 2) {
      const Fiducial plus = kFiducials[k], minus = kFiducials[k + 1];
      c.a0 += (table(plus, m) + table(minus, m)) / 3.0;
      c.a[fiducial_axis(plus)] = table(plus, m) - table(minus, m);
    }
    pi[m] = from_pauli_coords(c);
  }

  auto rescaled = [](std::vector<Mat2> e) {
    Mat2 s;
    for (const auto& x : e) s += x;
    const Mat2 k = apply_spectral(s, [](double l) { return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0; });
    for (auto& x : e) {
      x = k * x * k;
      x = 0.5 * (x + adjoint(x));
    }
    return e;
  };
  auto clip = [](const Mat2& x) { return apply_spectral(x, [](double l) { return std::max(l, 0.0); }); };

  std::vector<Mat2> best;
  double best_residual = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<Mat2>& iterate) {
    std::vector<Mat2> clipped;
    for (const auto& x : iterate) clipped.push_back(clip(x));
    auto candidate = rescaled(std::move(clipped));
    const double r = least_squares_residual(candidate, table);
    if (r < best_residual) {
      best_residual = r;
      best = std::move(candidate);
    }
  };

  consider(pi);
  const double inv_n = 1.0 / static_cast<double>(n);
  int iterations = 0;
  bool converged = false;
  while (iterations < opts.max_iterations) {
    ++iterations;
    Mat2 excess = Mat2::zero() - Mat2::identity();
    for (const auto& x : pi) excess += x;
    double change = 0.0;
    for (auto& x : pi) {
      const Mat2 next = clip(x - inv_n * excess);
      for (std::size_t i = 0; i < 4; ++i) change += std::norm(next.m[i] - x.m[i]);
      x = next;
    }
    consider(pi);
    if (std::sqrt(change) < opts.tolerance) {
      converged = true;
      break;
    }
  }
  return {Povm(std::move(best), table.outcomes()), best_residual, iterations, converged};
}

// ---------------------------------------------------------------------------
// Born-rule route to the Fisher information

inline ProbabilityVector born_probabilities(const Povm& povm, const PureQubit& probe, const ChannelParams& params) {
  const auto j = bloch_jacobian(probe.bloch(), params);
  ProbabilityVector pv;
  pv.dp.assign(2, {});
  for (const auto& e : povm.elements()) {
    const auto c = pauli_coords(e);
    pv.p.push_back(0.5 * (c.a0 + dot(c.a, j.r)));
    pv.dp[0].push_back(0.5 * dot(c.a, j.d_phi));
    pv.dp[1].push_back(0.5 * dot(c.a, j.d_chi));
  }
  return pv;
}

inline FisherMatrix fisher_from_povm(const Povm& povm, const PureQubit& probe, const ChannelParams& params) {
  return fisher_from_probabilities(born_probabilities(povm, probe, params), {"phi", "chi"});
}

}  // namespace dfpfisher
