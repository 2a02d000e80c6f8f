// dfpfisher/fisher_matrix.hpp
//
// Symmetric 1x1 or 2x2 information matrix shared by the classical (outcome
// statistics) and quantum (state family) routes.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dfpfisher {

class FisherMatrix {
 public:
  FisherMatrix() : FisherMatrix(std::vector<std::string>{"phi"}) {}

  explicit FisherMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {
    if (labels_.empty() || labels_.size() > 2)
      throw std::invalid_argument("FisherMatrix: dimension must be 1 or 2");
  }

  static FisherMatrix diagonal(std::vector<double> diag, std::vector<std::string> labels) {
    if (diag.size() != labels.size())
      throw std::invalid_argument("FisherMatrix: label count does not match dimension");
    FisherMatrix f(std::move(labels));
    for (std::size_t i = 0; i < diag.size(); ++i) f.set(i, i, diag[i]);
    return f;
  }

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  double operator()(std::size_t i, std::size_t j) const { return values_.at(i * dim() + j); }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    values_.at(i * dim() + j) = v;
    values_.at(j * dim() + i) = v;
  }

  /// Set when some outcome had vanishing probability but non-vanishing
  /// derivative: the information is unbounded and the entries are meaningless.
  bool divergent() const { return divergent_; }
  void mark_divergent() { divergent_ = true; }

  double determinant() const {
    if (dim() == 1) return (*this)(0, 0);
    return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
  }

  bool is_diagonal(double tol = 0.0) const {
    return dim() == 1 || std::abs((*this)(0, 1)) <= tol;
  }

  /// Eigenvalues in ascending order.
  std::vector<double> eigenvalues() const {
    if (dim() == 1) return {(*this)(0, 0)};
    const double a = (*this)(0, 0), b = (*this)(0, 1), d = (*this)(1, 1);
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    return {mean - rad, mean + rad};
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  bool divergent_ = false;
};

}  // namespace dfpfisher
