#pragma once

#include "strukt/polycore.hpp"

namespace strukt {

// Thin SVD a = U diag(s) V^*, computed by LAPACK gesdd. U and V are left
// empty unless vectors are requested.
template <FieldScalar S>
struct Svd {
  Eigen::VectorXd s;
  Mat<S> U, V;
};

Svd<double> lapack_svd(const MatR& a, bool vectors);
Svd<Complex> lapack_svd(const MatC& a, bool vectors);

template <FieldScalar S>
Eigen::VectorXd singular_values(const Mat<S>& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  return lapack_svd(a, false).s;
}

// Smallest of the min(rows, cols) singular values.
template <FieldScalar S>
double sigma_min(const Mat<S>& a) {
  Eigen::VectorXd s = singular_values(a);
  return s.size() ? s(s.size() - 1) : 0.0;
}

template <FieldScalar S>
double spectral_norm(const Mat<S>& a) {
  Eigen::VectorXd s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

// Pseudoinverse solve: singular values at or below the cutoff are dropped.
template <FieldScalar S>
class MinNormSolver {
 public:
  MinNormSolver(const Mat<S>& a, double cutoff)
      : rows_(a.rows()), cols_(a.cols()), svd_(lapack_svd(a, true)) {
    const auto& s = svd_.s;
    inv_ = Eigen::VectorXd::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > cutoff) inv_(i) = 1.0 / s(i);
  }

  Mat<S> solve(const Mat<S>& b) const {
    if (b.rows() != rows_) throw InvalidArgument("right-hand side has the wrong length");
    Mat<S> t = svd_.U.adjoint() * b;
    t = inv_.asDiagonal() * t;
    return svd_.V * t;
  }

  const Eigen::VectorXd& singular_values() const { return svd_.s; }
  double sigma_min() const {
    const auto& s = svd_.s;
    return s.size() ? s(s.size() - 1) : 0.0;
  }

 private:
  Index rows_, cols_;
  Svd<S> svd_;
  Eigen::VectorXd inv_;
};

template <FieldScalar S>
Mat<S> vec(const Mat<S>& m) {
  return Eigen::Map<const Mat<S>>(m.data(), m.size(), 1);
}

template <FieldScalar S>
Mat<S> unvec(const Mat<S>& v, Index rows, Index cols) {
  return Eigen::Map<const Mat<S>>(v.data(), rows, cols);
}

template <FieldScalar S>
Mat<S> kron(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace strukt
