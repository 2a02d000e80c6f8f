// dfpfisher/wfh.hpp
//
// Weak-field homodyne: the signal is mixed with a few-photon coherent local
// oscillator gamma on a 50:50 beam splitter and each output is read by an
// N-bin click detector. The outcome x = (x1, x2) counts clicks on the
// transmitted and reflected arms.
//
// The DFP q_x(alpha) (response to coherent states) is a signed sum of
// Gaussians in alpha. Each Gaussian term maps to a Gaussian phase-space kernel
// zeta_x, so that p_x = int d^2 alpha W(alpha) zeta_x(alpha) for any state
// with Wigner function W. For Gaussian W this overlap is closed form.
//
// Phase-space convention: alpha = alpha_x + i alpha_p, and the coherent state
// |a> has W(alpha) = (2/pi) exp(-2 |alpha - a|^2), i.e. covariance diag(1/4, 1/4).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dfpfisher/fisher.hpp"
#include "dfpfisher/linalg.hpp"

namespace dfpfisher::wfh {

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Detector {
  Detector(cplx gamma_, int n_bins_) : gamma(gamma_), n_bins(n_bins_) {
    if (n_bins < 1) throw std::invalid_argument("wfh::Detector: need at least one bin");
    if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
      throw std::invalid_argument("wfh::Detector: non-finite local oscillator");
  }
  cplx gamma;
  int n_bins;
};

struct Outcome {
  int x1 = 0;  ///< clicks on the transmitted arm
  int x2 = 0;  ///< clicks on the reflected arm
  friend bool operator==(Outcome, Outcome) = default;
};

inline void check_outcome(const Detector& det, Outcome x) {
  if (x.x1 < 0 || x.x2 < 0 || x.x1 > det.n_bins || x.x2 > det.n_bins)
    throw std::invalid_argument("wfh: outcome outside [0, N]^2");
}

/// All (N+1)^2 outcomes, x1-major.
inline std::vector<Outcome> all_outcomes(const Detector& det) {
  std::vector<Outcome> out;
  for (int x1 = 0; x1 <= det.n_bins; ++x1)
    for (int x2 = 0; x2 <= det.n_bins; ++x2) out.push_back({x1, x2});
  return out;
}

inline std::size_t outcome_index(const Detector& det, Outcome x) {
  return static_cast<std::size_t>(x.x1 * (det.n_bins + 1) + x.x2);
}

namespace detail {
inline long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return std::round(r);
}
}  // namespace detail

/// q_x(alpha) as the signed double binomial sum. Accumulated in extended
/// precision: individual terms reach C(N,x1)C(N,x2)C(x1,y1)C(x2,y2) while the
/// result can be tiny.
inline double dfp_probability(const Detector& det, Outcome x, cplx alpha) {
  check_outcome(det, x);
  const int n = det.n_bins;
  const long double two_n = 2.0L * n;
  const long double plus = std::norm(alpha + det.gamma);
  const long double minus = std::norm(alpha - det.gamma);
  long double sum = 0.0L;
  for (int y1 = 0; y1 <= x.x1; ++y1)
    for (int y2 = 0; y2 <= x.x2; ++y2) {
      const long double sign = ((x.x1 - y1 + x.x2 - y2) % 2 == 0) ? 1.0L : -1.0L;
      const long double e = std::exp(-static_cast<long double>(n - y1) / two_n * plus -
                                     static_cast<long double>(n - y2) / two_n * minus);
      sum += sign * detail::binomial(x.x1, y1) * detail::binomial(x.x2, y2) * e;
    }
  return static_cast<double>(detail::binomial(n, x.x1) * detail::binomial(n, x.x2) * sum);
}

// ---------------------------------------------------------------------------
// Kernel terms

/// One (y1, y2) term of the sum. sigma2 = 2N / (2N - y1 - y2) and
/// gamma_tilde = (y2 - y1) gamma / (2N). The term y1 = y2 = N has
/// sigma2 = +inf and is the constant function.
struct KernelTerm {
  double weight = 0.0;
  double sigma2 = 1.0;
  cplx gamma_tilde;
  int y1 = 0;
  int y2 = 0;

  bool degenerate() const { return std::isinf(sigma2); }
  /// Centre of the Gaussian in alpha: -sigma2 * gamma_tilde.
  cplx center() const { return -sigma2 * gamma_tilde; }
  /// exp(-|gamma|^2/sigma2 + sigma2 |gamma_tilde|^2): the term's value at its centre.
  double amplitude(cplx gamma) const {
    if (degenerate()) return 1.0;
    return std::exp(-std::norm(gamma) / sigma2 + sigma2 * std::norm(gamma_tilde));
  }
};

inline std::vector<KernelTerm> kernel_terms(const Detector& det, Outcome x) {
  check_outcome(det, x);
  const int n = det.n_bins;
  std::vector<KernelTerm> out;
  out.reserve(static_cast<std::size_t>((x.x1 + 1) * (x.x2 + 1)));
  for (int y1 = 0; y1 <= x.x1; ++y1)
    for (int y2 = 0; y2 <= x.x2; ++y2) {
      KernelTerm t;
      t.y1 = y1;
      t.y2 = y2;
      const double sign = ((x.x1 - y1 + x.x2 - y2) % 2 == 0) ? 1.0 : -1.0;
      t.weight = sign * static_cast<double>(detail::binomial(n, x.x1) * detail::binomial(n, x.x2) *
                                            detail::binomial(x.x1, y1) * detail::binomial(x.x2, y2));
      const int denom = 2 * n - y1 - y2;
      t.sigma2 = denom == 0 ? std::numeric_limits<double>::infinity() : 2.0 * n / denom;
      t.gamma_tilde = static_cast<double>(y2 - y1) / (2.0 * n) * det.gamma;
      out.push_back(t);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian Wigner functions

struct GaussianWigner {
  cplx mean;
  /// Covariance in (alpha_x, alpha_p): [[xx, xp], [xp, pp]].
  double xx = 0.25;
  double xp = 0.0;
  double pp = 0.25;

  static GaussianWigner coherent(cplx a) { return {a, 0.25, 0.0, 0.25}; }

  double determinant() const { return xx * pp - xp * xp; }

  double operator()(cplx alpha) const {
    const double dx = alpha.real() - mean.real(), dp = alpha.imag() - mean.imag();
    const double det = determinant();
    const double q = (pp * dx * dx - 2.0 * xp * dx * dp + xx * dp * dp) / det;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
  }

  /// State after the phase shift alpha -> alpha e^{i phi}.
  GaussianWigner rotated(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    GaussianWigner r;
    r.mean = mean * std::polar(1.0, phi);
    r.xx = c * c * xx - 2.0 * c * s * xp + s * s * pp;
    r.pp = s * s * xx + 2.0 * c * s * xp + c * c * pp;
    r.xp = c * s * (xx - pp) + (c * c - s * s) * xp;
    return r;
  }

  /// <a^dag a> = |mean|^2 + xx + pp - 1/2.
  double mean_photon() const { return std::norm(mean) + xx + pp - 0.5; }
};

/// Displaced squeezed vacuum, W = (2/pi) exp(-2 s^2 (ax - a0)^2 - 2 ap^2 / s^2);
/// s < 1 squeezes the P quadrature.
inline GaussianWigner wigner_dsv(double alpha0, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("wigner_dsv: s must be positive");
  return {cplx{alpha0, 0.0}, 1.0 / (4.0 * s * s), 0.0, s * s / 4.0};
}

inline double mean_photon(double alpha0, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("mean_photon: s must be positive");
  return alpha0 * alpha0 + (s * s - 1.0) * (s * s - 1.0) / (4.0 * s * s);
}

// ---------------------------------------------------------------------------
// Kernel

/// Absolute tolerance of the normalisation check performed on construction.
inline constexpr double kNormalizationTolerance = 1e-8;

/// zeta_x for one outcome. Only obtainable through build(), which checks the
/// closed-form overlap against the DFP sum on a set of coherent states.
class Kernel {
 public:
  static Kernel build(const Detector& det, Outcome x) {
    Kernel k(det, x, kernel_terms(det, x));
    const std::array<cplx, 5> probes{cplx{0.0, 0.0}, cplx{0.5, 0.2}, cplx{-0.7, 0.4}, det.gamma, -det.gamma};
    for (const auto a : probes) {
      const double want = dfp_probability(det, x, a);
      const double got = k.overlap(GaussianWigner::coherent(a));
      if (!(std::abs(got - want) <= kNormalizationTolerance))
        throw NormalizationError("wfh::Kernel: coherent-state overlap " + std::to_string(got) +
                                 " disagrees with DFP " + std::to_string(want));
    }
    return k;
  }

  const Detector& detector() const { return det_; }
  Outcome outcome() const { return x_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }

  /// Complex evaluation of the expanded exponent
  ///   -(|a|^2 + s2 |gt|^2 / 2)/(s2 - 1/2) - s2/(s2 - 1/2) (a* gt + a gt*) - |gamma|^2 / s2
  /// with prefactor s2 / (s2 - 1/2). The imaginary part vanishes analytically.
  cplx zeta_complex(cplx alpha) const {
    cplx sum{0.0};
    for (const auto& t : terms_) {
      if (t.degenerate()) {
        sum += t.weight;
        continue;
      }
      const double v = t.sigma2 - 0.5;
      const cplx cross = std::conj(alpha) * t.gamma_tilde + alpha * std::conj(t.gamma_tilde);
      const cplx expo = -(std::norm(alpha) + 0.5 * t.sigma2 * std::norm(t.gamma_tilde)) / v -
                        t.sigma2 / v * cross - std::norm(det_.gamma) / t.sigma2;
      sum += t.weight * t.sigma2 / v * std::exp(expo);
    }
    return sum;
  }

  double zeta(cplx alpha) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      if (t.degenerate()) {
        sum += t.weight;
        continue;
      }
      const double v = t.sigma2 - 0.5;
      sum += t.weight * t.amplitude(det_.gamma) * t.sigma2 / v * std::exp(-std::norm(alpha - t.center()) / v);
    }
    return sum;
  }

  /// int W zeta d^2 alpha in closed form, without range checks. Each finite
  /// term contributes w A sigma2 pi N(mean; centre, Sigma + (sigma2 - 1/2)/2 I).
  double overlap(const GaussianWigner& w) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      if (t.degenerate()) {
        sum += t.weight;
        continue;
      }
      const double half_v = 0.5 * (t.sigma2 - 0.5);
      const GaussianWigner conv{t.center(), w.xx + half_v, w.xp, w.pp + half_v};
      sum += t.weight * t.amplitude(det_.gamma) * t.sigma2 * std::numbers::pi * conv(w.mean);
    }
    return sum;
  }

 private:
  Kernel(const Detector& det, Outcome x, std::vector<KernelTerm> terms) : det_(det), x_(x), terms_(std::move(terms)) {}
  Detector det_;
  Outcome x_;
  std::vector<KernelTerm> terms_;
};

/// p_x for a Gaussian state. Values outside [-1e-6, 1 + 1e-6] indicate a
/// normalisation defect and throw; otherwise the result is clamped to [0, 1].
inline double probability_wigner(const Kernel& k, const GaussianWigner& w) {
  const double p = k.overlap(w);
  if (!(p >= -1e-6 && p <= 1.0 + 1e-6))
    throw NormalizationError("probability_wigner: probability " + std::to_string(p) + " out of range");
  return std::clamp(p, 0.0, 1.0);
}

/// Validated kernels for every outcome of one detector.
class Model {
 public:
  explicit Model(const Detector& det) : det_(det) {
    for (auto x : all_outcomes(det)) kernels_.push_back(Kernel::build(det, x));
  }
  const Detector& detector() const { return det_; }
  const Kernel& kernel(Outcome x) const { return kernels_.at(outcome_index(det_, x)); }
  const std::vector<Kernel>& kernels() const { return kernels_; }

 private:
  Detector det_;
  std::vector<Kernel> kernels_;
};

// ---------------------------------------------------------------------------
// Phase estimation

/// Coherent amplitude (DFP route) or Gaussian Wigner function (kernel route).
using Probe = std::variant<cplx, GaussianWigner>;

inline constexpr double kDefaultPhi = 0.1;
inline constexpr double kDefaultStep = 1e-4;

/// q_x of the probe after the phase shift phi.
inline double outcome_probability(const Model& model, Outcome x, const Probe& probe, double phi) {
  if (const auto* a = std::get_if<cplx>(&probe)) return dfp_probability(model.detector(), x, *a * std::polar(1.0, phi));
  return probability_wigner(model.kernel(x), std::get<GaussianWigner>(probe).rotated(phi));
}

struct OutcomeFisher {
  Outcome outcome;
  double probability = 0.0;
  double derivative = 0.0;
  double value = 0.0;
  /// q below the probability floor while |dq| is not: the ratio is not
  /// resolvable, so `value` is left at 0 and the outcome is reported instead.
  bool below_floor = false;
  /// Central difference at h agrees with the one at h/2.
  bool step_consistent = true;
};

/// F^(x) = (d_phi q_x)^2 / q_x by central differences at `phi`.
inline OutcomeFisher outcome_fisher(const Model& model, Outcome x, const Probe& probe, double phi = kDefaultPhi,
                                    double h = kDefaultStep) {
  if (!(h > 0.0)) throw std::invalid_argument("outcome_fisher: step must be positive");
  auto q = [&](double ph) { return outcome_probability(model, x, probe, ph); };
  OutcomeFisher r;
  r.outcome = x;
  r.probability = q(phi);
  r.derivative = (q(phi + h) - q(phi - h)) / (2.0 * h);
  const double half = (q(phi + 0.5 * h) - q(phi - 0.5 * h)) / h;
  r.step_consistent = std::abs(half - r.derivative) <= 1e-6 * std::abs(half) + 1e-9;
  if (r.probability < kProbabilityFloor) {
    r.below_floor = std::abs(r.derivative) >= kProbabilityFloor;
    return r;
  }
  r.value = r.derivative * r.derivative / r.probability;
  return r;
}

struct FisherBreakdown {
  std::vector<OutcomeFisher> outcomes;
  /// Sum over the resolvable outcomes.
  double total = 0.0;
  std::size_t below_floor = 0;
  bool step_consistent = true;
};

inline FisherBreakdown total_fisher(const Model& model, const Probe& probe, double phi = kDefaultPhi,
                                    double h = kDefaultStep) {
  FisherBreakdown b;
  for (auto x : all_outcomes(model.detector())) {
    auto f = outcome_fisher(model, x, probe, phi, h);
    b.total += f.value;
    b.below_floor += f.below_floor ? 1 : 0;
    b.step_consistent = b.step_consistent && f.step_consistent;
    b.outcomes.push_back(f);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Squeezing trade-off at fixed energy

/// s < 1 with (s^2 - 1)^2 / (4 s^2) = (1 - r_d) * energy, i.e. the squeezing
/// that carries the part of the energy not spent on displacement.
inline double squeezing_for_split(double energy, double r_d) {
  if (!(energy > 0.0)) throw std::invalid_argument("squeezing_for_split: energy must be positive");
  if (!(r_d > 0.0 && r_d <= 1.0)) throw std::invalid_argument("squeezing_for_split: r_d must lie in (0, 1]");
  // (1 - s^2) / (2 s) = k  =>  s = sqrt(k^2 + 1) - k
  const double k = std::sqrt((1.0 - r_d) * energy);
  return 1.0 / (std::sqrt(k * k + 1.0) + k);
}

struct SqueezePoint {
  double alpha = 0.0;  ///< sqrt(energy)
  double energy = 0.0;
  double r_d = 1.0;
  double alpha0 = 0.0;
  double s = 1.0;
  double mean_photon = 0.0;
  double fisher = 0.0;
  std::size_t below_floor = 0;
};

/// Total phase information of the displaced squeezed vacuum with
/// alpha0^2 = r_d * energy and the rest of the energy in P squeezing.
inline SqueezePoint squeeze_tradeoff_point(const Model& model, double energy, double r_d, double phi = kDefaultPhi,
                                           double h = kDefaultStep) {
  SqueezePoint pt;
  pt.energy = energy;
  pt.alpha = std::sqrt(energy);
  pt.r_d = r_d;
  pt.alpha0 = std::sqrt(r_d * energy);
  pt.s = squeezing_for_split(energy, r_d);
  pt.mean_photon = mean_photon(pt.alpha0, pt.s);
  const auto b = total_fisher(model, wigner_dsv(pt.alpha0, pt.s), phi, h);
  pt.fisher = b.total;
  pt.below_floor = b.below_floor;
  return pt;
}

/// One point per (alpha, r_d) with energy alpha^2, alpha-major.
inline std::vector<SqueezePoint> squeeze_tradeoff_scan(const Model& model, const std::vector<double>& alphas,
                                                       const std::vector<double>& rd_values, double phi = kDefaultPhi,
                                                       double h = kDefaultStep) {
  std::vector<SqueezePoint> out;
  for (double a : alphas)
    for (double rd : rd_values) out.push_back(squeeze_tradeoff_point(model, a * a, rd, phi, h));
  return out;
}

}  // namespace dfpfisher::wfh
