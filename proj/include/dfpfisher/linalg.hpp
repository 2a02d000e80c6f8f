// dfpfisher/linalg.hpp
//
// Fixed-size helpers for single-qubit work: real 3-vectors (Bloch space) and
// complex 2x2 matrices. Everything here is small enough to be done in closed
// form, so no external linear algebra package is pulled in.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace dfpfisher {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline bool all_finite(Vec3 a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<cplx, 4> m{};

  constexpr cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  constexpr const cplx& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

  static constexpr Mat2 identity() { return {{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}}}; }
  static constexpr Mat2 zero() { return {}; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
  }
  friend Mat2 operator*(cplx s, const Mat2& a) {
    Mat2 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
    return r;
  }
  friend Mat2 operator*(double s, const Mat2& a) { return cplx{s} * a; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  Mat2& operator+=(const Mat2& b) { return *this = *this + b; }
};

inline Mat2 adjoint(const Mat2& a) {
  return {{std::conj(a(0, 0)), std::conj(a(1, 0)), std::conj(a(0, 1)), std::conj(a(1, 1))}};
}
inline cplx trace(const Mat2& a) { return a(0, 0) + a(1, 1); }

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

inline bool is_hermitian(const Mat2& a, double tol) { return max_abs_diff(a, adjoint(a)) <= tol; }

namespace pauli {
inline constexpr Mat2 x{{cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}}};
inline constexpr Mat2 y{{cplx{0.0}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{0.0}}};
inline constexpr Mat2 z{{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{-1.0}}};
}  // namespace pauli

/// Pauli coordinates of a Hermitian matrix: M = (a0 I + a.sigma) / 2.
struct PauliCoords {
  double a0 = 0.0;
  Vec3 a;
};

inline PauliCoords pauli_coords(const Mat2& h) {
  return {trace(h).real(),
          {trace(pauli::x * h).real(), trace(pauli::y * h).real(), trace(pauli::z * h).real()}};
}

inline Mat2 from_pauli_coords(const PauliCoords& c) {
  Mat2 r;
  r(0, 0) = 0.5 * (c.a0 + c.a.z);
  r(1, 1) = 0.5 * (c.a0 - c.a.z);
  r(0, 1) = 0.5 * cplx{c.a.x, -c.a.y};
  r(1, 0) = 0.5 * cplx{c.a.x, c.a.y};
  return r;
}

/// Spectral data of a Hermitian 2x2 matrix. `plus` belongs to the larger
/// eigenvalue. For a multiple of the identity the axis is arbitrary (+z).
struct HermitianEigen {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
};

inline HermitianEigen eigen_hermitian(const Mat2& h) {
  const auto c = pauli_coords(h);
  const double r = norm(c.a);
  HermitianEigen e;
  e.lambda_minus = 0.5 * (c.a0 - r);
  e.lambda_plus = 0.5 * (c.a0 + r);
  if (r > 0.0) e.axis = (1.0 / r) * c.a;
  return e;
}

/// f(H) for Hermitian H via its two spectral projectors.
template <class F>
Mat2 apply_spectral(const Mat2& h, F&& f) {
  const auto e = eigen_hermitian(h);
  const double fp = f(e.lambda_plus);
  const double fm = f(e.lambda_minus);
  // f(l+) P+ + f(l-) P-, with P+- = (I +- n.sigma)/2
  return from_pauli_coords({fp + fm, (fp - fm) * e.axis});
}

inline double min_eigenvalue(const Mat2& h) { return eigen_hermitian(h).lambda_minus; }

}  // namespace dfpfisher
