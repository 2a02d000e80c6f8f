// dfpfisher/qubit.hpp
//
// Single-qubit (polarisation) states, the six Pauli-eigenstate fiducials,
// the two-parameter channel and the pure-state quantum Fisher information.
//
// Channel conventions:
//   phase    U(phi) = diag(e^{-i phi/2}, e^{i phi/2})                 (rotation about z)
//   rotation V(chi) = [[cos(chi/2), -i sin(chi/2)], [-i sin(chi/2), cos(chi/2)]]  (about x)
// On Bloch vectors these act as right-handed rotations by phi about z and by
// chi about x.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dfpfisher/fisher_matrix.hpp"
#include "dfpfisher/linalg.hpp"

namespace dfpfisher {

using Spinor = std::array<cplx, 2>;

inline constexpr double kPureTolerance = 1e-12;

/// Pure qubit state stored as a unit Bloch vector.
class PureQubit {
 public:
  static PureQubit from_bloch(Vec3 r) {
    if (!all_finite(r)) throw std::invalid_argument("PureQubit: non-finite Bloch vector");
    if (std::abs(norm(r) - 1.0) > kPureTolerance)
      throw std::invalid_argument("PureQubit: Bloch vector is not unit length");
    return PureQubit(r);
  }

  /// Spherical coordinates of the Bloch vector (polar from +z).
  static PureQubit from_angles(double polar, double azimuth) {
    if (!std::isfinite(polar) || !std::isfinite(azimuth))
      throw std::invalid_argument("PureQubit: non-finite angles");
    const double s = std::sin(polar);
    return PureQubit({s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)});
  }

  /// Any non-zero spinor; normalised on the way in.
  static PureQubit from_spinor(const Spinor& psi) {
    const double n2 = std::norm(psi[0]) + std::norm(psi[1]);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("PureQubit: null spinor");
    const cplx ab = std::conj(psi[0]) * psi[1];
    return PureQubit({2.0 * ab.real() / n2, 2.0 * ab.imag() / n2,
                      (std::norm(psi[0]) - std::norm(psi[1])) / n2});
  }

  Vec3 bloch() const { return bloch_; }

  /// (cos(theta/2), e^{i varphi} sin(theta/2)); (0,1,0) maps to (1, i)/sqrt(2).
  Spinor spinor() const {
    const double theta = std::acos(std::clamp(bloch_.z, -1.0, 1.0));
    const double varphi = std::atan2(bloch_.y, bloch_.x);
    return {cplx{std::cos(0.5 * theta)}, std::polar(std::sin(0.5 * theta), varphi)};
  }

 private:
  explicit PureQubit(Vec3 r) : bloch_(r) {}
  Vec3 bloch_;
};

class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const Mat2& rho) : rho_(rho) {
    for (const auto& v : rho.m)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("DensityMatrix2: non-finite entry");
    if (!is_hermitian(rho, 1e-12)) throw std::invalid_argument("DensityMatrix2: not Hermitian");
    if (std::abs(trace(rho) - 1.0) > 1e-12) throw std::invalid_argument("DensityMatrix2: trace != 1");
    if (min_eigenvalue(rho) < -1e-12) throw std::invalid_argument("DensityMatrix2: negative eigenvalue");
  }

  const Mat2& matrix() const { return rho_; }
  Vec3 bloch() const { return pauli_coords(rho_).a; }

 private:
  Mat2 rho_;
};

/// rho = (I + r.sigma) / 2; accepts mixed states (|r| <= 1).
inline DensityMatrix2 density_of(Vec3 r) {
  if (!all_finite(r)) throw std::invalid_argument("density_of: non-finite Bloch vector");
  if (norm(r) > 1.0 + kPureTolerance) throw std::invalid_argument("density_of: |r| > 1");
  return DensityMatrix2(from_pauli_coords({1.0, r}));
}
inline DensityMatrix2 density_of(const PureQubit& q) { return density_of(q.bloch()); }

// ---------------------------------------------------------------------------
// Fiducials

enum class Fiducial { H = 0, V, D, A, R, L };

inline constexpr std::array<Fiducial, 6> kFiducials{Fiducial::H, Fiducial::V, Fiducial::D,
                                                    Fiducial::A, Fiducial::R, Fiducial::L};

constexpr std::size_t index(Fiducial f) { return static_cast<std::size_t>(f); }

constexpr std::string_view label(Fiducial f) {
  constexpr std::array<std::string_view, 6> names{"H", "V", "D", "A", "R", "L"};
  return names[index(f)];
}

inline Fiducial fiducial_from_label(std::string_view s) {
  for (auto f : kFiducials)
    if (label(f) == s) return f;
  throw std::invalid_argument("unknown fiducial label '" + std::string(s) + "'");
}

/// H/V = +-z, D/A = +-x, R/L = +-y.
constexpr int fiducial_axis(Fiducial f) {
  constexpr std::array<int, 6> axis{2, 2, 0, 0, 1, 1};
  return axis[index(f)];
}
constexpr double fiducial_sign(Fiducial f) { return index(f) % 2 == 0 ? 1.0 : -1.0; }

inline Vec3 fiducial_bloch(Fiducial f) {
  Vec3 r;
  r[fiducial_axis(f)] = fiducial_sign(f);
  return r;
}

inline PureQubit fiducial_state(Fiducial f) { return PureQubit::from_bloch(fiducial_bloch(f)); }

// ---------------------------------------------------------------------------
// Quasi-probability decomposition over the fiducials

/// Coefficients indexed by `index(Fiducial)`.
using CoefficientMap = std::array<double, 6>;

/// Canonical symmetric choice C_{+i} = 1/6 + r_i/2, C_{-i} = 1/6 - r_i/2.
inline CoefficientMap coefficients_of_bloch(Vec3 r) {
  CoefficientMap c{};
  for (auto f : kFiducials) c[index(f)] = 1.0 / 6.0 + fiducial_sign(f) * 0.5 * r[fiducial_axis(f)];
  return c;
}

inline CoefficientMap decompose(const DensityMatrix2& rho) { return coefficients_of_bloch(rho.bloch()); }

/// sum_alpha C_alpha |alpha><alpha|
inline Mat2 recompose(const CoefficientMap& c) {
  Mat2 out;
  for (auto f : kFiducials) out += c[index(f)] * density_of(fiducial_bloch(f)).matrix();
  return out;
}

/// Linear part of the decomposition, for derivatives of the Bloch vector.
inline CoefficientMap coefficient_derivative_of_bloch(Vec3 dr) {
  CoefficientMap c{};
  for (auto f : kFiducials) c[index(f)] = fiducial_sign(f) * 0.5 * dr[fiducial_axis(f)];
  return c;
}

// ---------------------------------------------------------------------------
// Channel

/// Operator product applied to the probe. The two unitaries do not commute.
enum class ChannelOrder {
  PhaseThenRotation,  ///< psi -> V(chi) U(phi) psi
  RotationThenPhase,  ///< psi -> U(phi) V(chi) psi
};

struct ChannelParams {
  ChannelParams(double phi_, double chi_, ChannelOrder order_) : phi(phi_), chi(chi_), order(order_) {}
  double phi;
  double chi;
  ChannelOrder order;
};

inline Mat2 phase_unitary(double phi) {
  return {{std::polar(1.0, -0.5 * phi), cplx{0.0}, cplx{0.0}, std::polar(1.0, 0.5 * phi)}};
}

inline Mat2 rotation_unitary(double chi) {
  const cplx c{std::cos(0.5 * chi)};
  const cplx s{0.0, -std::sin(0.5 * chi)};
  return {{c, s, s, c}};
}

inline Mat2 channel_unitary(const ChannelParams& p) {
  const Mat2 u = phase_unitary(p.phi), v = rotation_unitary(p.chi);
  return p.order == ChannelOrder::PhaseThenRotation ? v * u : u * v;
}

inline Spinor apply_matrix(const Mat2& m, const Spinor& psi) {
  return {m(0, 0) * psi[0] + m(0, 1) * psi[1], m(1, 0) * psi[0] + m(1, 1) * psi[1]};
}

namespace detail {
inline void check_finite(const ChannelParams& p) {
  if (!std::isfinite(p.phi) || !std::isfinite(p.chi))
    throw std::invalid_argument("ChannelParams: non-finite angle");
}
inline Vec3 rotate_z(Vec3 r, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * r.x - s * r.y, s * r.x + c * r.y, r.z};
}
inline Vec3 rotate_x(Vec3 r, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {r.x, c * r.y - s * r.z, s * r.y + c * r.z};
}
}  // namespace detail

/// Spinor route: multiplies by the 2x2 unitaries.
inline PureQubit evolve(const PureQubit& probe, const ChannelParams& p) {
  detail::check_finite(p);
  return PureQubit::from_spinor(apply_matrix(channel_unitary(p), probe.spinor()));
}

/// Output Bloch vector and its partial derivatives (d/dphi, d/dchi).
struct BlochJacobian {
  Vec3 r;
  Vec3 d_phi;
  Vec3 d_chi;
};

/// Bloch-space route, with the rotation generators ez x . and ex x . for the
/// derivatives.
inline BlochJacobian bloch_jacobian(Vec3 r0, const ChannelParams& p) {
  detail::check_finite(p);
  constexpr Vec3 ex{1, 0, 0}, ez{0, 0, 1};
  BlochJacobian j;
  if (p.order == ChannelOrder::PhaseThenRotation) {
    const Vec3 mid = detail::rotate_z(r0, p.phi);
    j.r = detail::rotate_x(mid, p.chi);
    j.d_phi = detail::rotate_x(cross(ez, mid), p.chi);
    j.d_chi = cross(ex, j.r);
  } else {
    const Vec3 mid = detail::rotate_x(r0, p.chi);
    j.r = detail::rotate_z(mid, p.phi);
    j.d_phi = cross(ez, j.r);
    j.d_chi = detail::rotate_z(cross(ex, mid), p.phi);
  }
  return j;
}

struct CoefficientDerivatives {
  CoefficientMap d_phi;
  CoefficientMap d_chi;
};

inline CoefficientDerivatives coefficient_derivatives(const PureQubit& probe, const ChannelParams& p) {
  const auto j = bloch_jacobian(probe.bloch(), p);
  return {coefficient_derivative_of_bloch(j.d_phi), coefficient_derivative_of_bloch(j.d_chi)};
}

/// Coefficients of the evolved state.
inline CoefficientMap evolved_coefficients(const PureQubit& probe, const ChannelParams& p) {
  return coefficients_of_bloch(bloch_jacobian(probe.bloch(), p).r);
}

/// Pure-state QFI, H_ij = 4 Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>),
/// with derivatives of the printed unitaries taken analytically.
inline FisherMatrix qfi_matrix(const PureQubit& probe, const ChannelParams& p) {
  detail::check_finite(p);
  const Mat2 u = phase_unitary(p.phi), v = rotation_unitary(p.chi);
  const cplx mi_half{0.0, -0.5};
  const Mat2 du = mi_half * (pauli::z * u);
  const Mat2 dv = mi_half * (pauli::x * v);

  Mat2 m, dm_phi, dm_chi;
  if (p.order == ChannelOrder::PhaseThenRotation) {
    m = v * u;
    dm_phi = v * du;
    dm_chi = dv * u;
  } else {
    m = u * v;
    dm_phi = du * v;
    dm_chi = u * dv;
  }
  const Spinor psi0 = probe.spinor();
  const std::array<Spinor, 2> d{apply_matrix(dm_phi, psi0), apply_matrix(dm_chi, psi0)};
  const Spinor psi = apply_matrix(m, psi0);

  auto inner = [](const Spinor& a, const Spinor& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  };
  FisherMatrix h({"phi", "chi"});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = i; j < 2; ++j)
      h.set(i, j, 4.0 * (inner(d[i], d[j]) - inner(d[i], psi) * inner(psi, d[j])).real());
  return h;
}

}  // namespace dfpfisher
