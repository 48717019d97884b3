#pragma once

#include <cmath>
#include <numbers>

#include "strukt/linalg.hpp"
#include "strukt/polycore.hpp"

namespace strukt {

// kn x (k+1)n pencil with block rows (.., -I_n, lambda I_n, ..). k = 0 gives zero rows.
template <FieldScalar S = double>
MatrixPolynomial<S> build_Lk(int k, Index n) {
  if (k < 0 || n < 1) throw InvalidArgument("build_Lk needs k >= 0 and n >= 1");
  MatrixPolynomial<S> L(k * n, (k + 1) * n, 1);
  for (int i = 0; i < k; ++i) {
    L.coeff(0).block(i * n, i * n, n, n).diagonal().setConstant(S(-1));
    L.coeff(1).block(i * n, (i + 1) * n, n, n).diagonal().setConstant(S(1));
  }
  return L;
}

// n x (k+1)n block row (lambda^k I_n, ..., lambda I_n, I_n), grade k.
template <FieldScalar S = double>
MatrixPolynomial<S> build_Lambda(int k, Index n) {
  if (k < 0 || n < 1) throw InvalidArgument("build_Lambda needs k >= 0 and n >= 1");
  MatrixPolynomial<S> N(n, (k + 1) * n, k);
  for (int j = 0; j <= k; ++j) N.coeff(j).block(0, (k - j) * n, n, n).diagonal().setConstant(S(1));
  return N;
}

struct SelectorMatrices {
  MatR E;  // [I_k 0] (x) I_n
  MatR F;  // [0 I_k] (x) I_n
};

SelectorMatrices selector_matrices(int k, Index n);

// Matrix C with C * [x_0; ...; x_t] = [y_0; ...; y_{d+t}] where y = K x and x is a
// column polynomial of grade t.
template <FieldScalar S>
Mat<S> convolution_matrix(const MatrixPolynomial<S>& K, int target_degree) {
  if (target_degree < 0) throw InvalidArgument("negative target degree");
  const int d = K.grade();
  const Index m = K.rows(), p = K.cols();
  Mat<S> C = Mat<S>::Zero((d + target_degree + 1) * m, (target_degree + 1) * p);
  for (int j = 0; j <= target_degree; ++j)
    for (int i = 0; i <= d; ++i) C.block((i + j) * m, j * p, m, p) = K.coeff(i);
  return C;
}

// Leading coefficient plus a sweep of sample points: the origin and the
// (deg+2)-th roots of unity at radii 1 and 3, plus one pseudo-random point.
template <FieldScalar S>
bool is_minimal_basis(const MatrixPolynomial<S>& Q, double tol = 1e-10, std::uint64_t seed = 1) {
  if (Q.rows() >= Q.cols()) throw InvalidArgument("a minimal basis must have fewer rows than columns");
  if (Q.rows() == 0) return true;
  const int d = Q.degree();
  if (d < 0) return false;
  for (Index r = 0; r < Q.rows(); ++r) {
    int rd = -1;
    for (int i = 0; i <= d; ++i)
      if (!(Q.coeff(i).row(r).array() == S(0)).all()) rd = i;
    if (rd != d) throw InvalidArgument("is_minimal_basis handles constant row degrees only");
  }
  auto full_rank = [&](const MatC& a) {
    Eigen::VectorXd s = singular_values<Complex>(a);
    return s(s.size() - 1) > tol * s(0);
  };
  if (!full_rank(Q.coeff(d).template cast<Complex>())) return false;

  std::vector<Complex> points{Complex(0.0)};
  const int m = d + 2;
  for (double radius : {1.0, 3.0})
    for (int j = 0; j < m; ++j) points.push_back(std::polar(radius, 2 * std::numbers::pi * j / m));
  Rng rng = make_rng(seed, 0x6d696e6261736973ULL);
  std::normal_distribution<double> dist;
  double re = dist(rng);
  double im = dist(rng);
  points.emplace_back(re, im);
  for (Complex z : points)
    if (!full_rank(evaluate(Q, z))) return false;
  return true;
}

template <FieldScalar S>
struct DualBasisPair {
  MatrixPolynomial<S> K;  // kn x (k+1)n, grade 1
  MatrixPolynomial<S> N;  // n x (k+1)n, grade k
  MatrixPolynomial<S> dR;  // N - Lambda_k^T (x) I_n, i.e. dR_k(lambda)^T
  int k = 0;
  Index n = 0;
  double residual = 0;  // ||K N^T||_F
};

inline double dual_completion_threshold(int k) {
  return std::numbers::pi / (12.0 * std::pow(k + 1.0, 1.5));
}

// Minimum-norm dR with K (Lambda_k (x) I_n + dR^T)^T = 0, column by column.
template <FieldScalar S>
DualBasisPair<S> dual_basis_complete(const MatrixPolynomial<S>& K, int k, Index n,
                                     double tol = 1e-12, bool enforce_threshold = true) {
  if (K.rows() != k * n || K.cols() != (k + 1) * n || K.grade() != 1)
    throw InvalidArgument("K must be a kn x (k+1)n pencil");
  MatrixPolynomial<S> delta = K - build_Lk<S>(k, n);
  const double dnorm = frob_norm(delta);
  if (enforce_threshold && !(dnorm < dual_completion_threshold(k)))
    throw PreconditionError("dual basis perturbation too large", dnorm, dual_completion_threshold(k));

  const MatrixPolynomial<S> LambdaT = build_Lambda<S>(k, n);
  const MatrixPolynomial<S> target = multiply(K, transpose(LambdaT));  // kn x n, grade k+1
  const Index p = (k + 1) * n;
  MatrixPolynomial<S> dRt(p, n, k);  // dR_k(lambda), (k+1)n x n
  if (k > 0 && frob_norm(target) > 0) {
    const Mat<S> C = convolution_matrix(K, k);
    const double cutoff = 1e-13 * std::max(1.0, spectral_norm<S>(C));
    MinNormSolver<S> solver(C, cutoff);
    Mat<S> rhs(C.rows(), n);
    for (Index col = 0; col < n; ++col)
      for (int s = 0; s <= k + 1; ++s)
        rhs.block(s * k * n, col, k * n, 1) = -target.coeff(s).col(col);
    Mat<S> x = solver.solve(rhs);
    for (Index col = 0; col < n; ++col)
      for (int s = 0; s <= k; ++s) dRt.coeff(s).col(col) = x.block(s * p, col, p, 1);
  }
  DualBasisPair<S> out;
  out.k = k;
  out.n = n;
  out.K = K;
  out.dR = transpose(dRt);
  out.N = LambdaT + out.dR;
  out.residual = frob_norm(multiply(K, transpose(out.N)));
  if (!(out.residual <= tol * std::max(1.0, frob_norm(K))))
    throw NumericalError("dual basis residual " + std::to_string(out.residual) + " above tolerance");
  return out;
}

}  // namespace strukt
