#pragma once

#include <vector>

#include "strukt/linalg.hpp"
#include "strukt/minbases.hpp"
#include "strukt/polycore.hpp"

namespace strukt {

// Projective eigenvalue (alpha, beta), scaled to unit length; lambda = alpha/beta.
struct Eigenvalue {
  Complex alpha{0.0};
  Complex beta{1.0};

  bool infinite(double tol = 1e-12) const { return std::abs(beta) <= tol * std::hypot(std::abs(alpha), std::abs(beta)); }
  Complex value() const { return alpha / beta; }
  static Eigenvalue finite(Complex z);
  static Eigenvalue at_infinity();
};

double chordal_distance(const Eigenvalue& x, const Eigenvalue& y);

struct SpectrumReport {
  std::vector<Eigenvalue> eigs;
  double matching_cost = 0;
  int unmatched = 0;
  double symmetry_score = 0;
};

// Eigenvalues of lambda L1 + L0, i.e. of the pair (-L0, L1).
SpectrumReport pencil_eigs(const MatR& L0, const MatR& L1);
SpectrumReport pencil_eigs(const MatC& L0, const MatC& L1);

SpectrumReport spectrum_from_list(const std::vector<Eigenvalue>& eigs);

// lambda diag(P_g, I, .., I) + [P_{g-1} .. P_0; -I 0 ..; ..; 0 .. -I 0].
template <FieldScalar S>
std::pair<Mat<S>, Mat<S>> first_companion(const MatrixPolynomial<S>& P) {
  const int g = P.grade();
  const Index n = P.rows();
  Mat<S> X = Mat<S>::Identity(g * n, g * n);
  Mat<S> Y = Mat<S>::Zero(g * n, g * n);
  X.topLeftCorner(n, n) = P.coeff(g);
  for (int j = 0; j < g; ++j) Y.block(0, j * n, n, n) = P.coeff(g - 1 - j);
  for (int i = 1; i < g; ++i) Y.block(i * n, (i - 1) * n, n, n) = -Mat<S>::Identity(n, n);
  return {Y, X};
}

template <FieldScalar S>
bool is_regular(const MatrixPolynomial<S>& P, double tol = 1e-12, std::uint64_t seed = 7) {
  if (P.rows() != P.cols()) return false;
  Rng rng = make_rng(seed, 0x72656775ULL);
  std::normal_distribution<double> dist;
  for (int t = 0; t < 3; ++t) {
    double re = dist(rng);
    double im = dist(rng);
    const Complex z(re, im);
    double scale = 0;
    for (int i = 0; i <= P.grade(); ++i) scale += std::pow(std::abs(z), i) * P.coeff(i).norm();
    if (scale == 0) return false;
    if (sigma_min<Complex>(evaluate(P, z)) > tol * scale) return true;
  }
  return false;
}

template <FieldScalar S>
SpectrumReport reference_polyeigs(const MatrixPolynomial<S>& P) {
  if (P.rows() != P.cols()) throw InvalidArgument("eigenvalues need a square polynomial");
  if (P.grade() < 1) throw InvalidArgument("eigenvalues need grade >= 1");
  if (!is_regular(P)) throw NumericalError("polynomial is singular; use minimal_indices instead");
  auto [Y, X] = first_companion(P);
  return pencil_eigs(Y, X);
}

// Max chordal distance over a min-cost matching of the spectrum against its
// image under the involution forced by the structure: lambda <-> 1/lambda
// (palindromic kinds), lambda <-> -lambda (alternating), conjugation
// (symmetric/skew-symmetric). The conjugate-transpose variants are experimental.
double symmetry_check(const SpectrumReport& spectrum, StructureKind kind, bool conjugate_transpose = false);

struct MatchReport {
  double max_distance = 0;
  int unmatched = 0;
  std::vector<int> assignment;  // a[i] matched to b[assignment[i]]
};

MatchReport compare_spectra(const SpectrumReport& a, const SpectrumReport& b, double tol = 1e-6);

// Square min-cost assignment (Hungarian method). Returns column per row.
std::vector<int> min_cost_assignment(const MatR& cost);

struct MinimalIndexReport {
  std::vector<int> right_indices;
  std::vector<int> left_indices;
  int normal_rank = 0;
  int degrees_searched = 0;
  bool partial = false;
};

template <FieldScalar S>
int normal_rank(const MatrixPolynomial<S>& P, double tol = 1e-10, std::uint64_t seed = 11) {
  Rng rng = make_rng(seed, 0x72616e6bULL);
  std::normal_distribution<double> dist;
  int best = 0;
  for (int t = 0; t < 3; ++t) {
    double re = dist(rng);
    double im = dist(rng);
    Eigen::VectorXd s = singular_values<Complex>(evaluate(P, Complex(re, im)));
    int r = 0;
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > tol * s(0)) ++r;
    best = std::max(best, r);
  }
  return best;
}

namespace detail {

template <FieldScalar S>
int numerical_rank(const Mat<S>& a, double tol) {
  Eigen::VectorXd s = singular_values<S>(a);
  int r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

// Right minimal indices from dim ker C_d = sum_i max(0, d - eps_i + 1).
template <FieldScalar S>
std::vector<int> right_indices(const MatrixPolynomial<S>& P, int count, int max_degree, double tol,
                               int& searched, bool& partial) {
  std::vector<int> out;
  Index prev_null = 0;
  int prev_le = 0;
  searched = 0;
  partial = false;
  if (count == 0) return out;
  for (int d = 0; d <= max_degree; ++d) {
    Mat<S> C = convolution_matrix(P, d);
    Index null = C.cols() - numerical_rank<S>(C, tol);
    int le = static_cast<int>(null - prev_null);
    for (int t = prev_le; t < le; ++t) out.push_back(d);
    prev_null = null;
    prev_le = le;
    searched = d;
    if (le >= count) return out;
  }
  partial = true;
  return out;
}

}  // namespace detail

template <FieldScalar S>
MinimalIndexReport minimal_indices(const MatrixPolynomial<S>& P, int max_degree = 8,
                                   double tol = 1e-10) {
  MinimalIndexReport rep;
  rep.normal_rank = normal_rank(P, tol);
  int sr = 0, sl = 0;
  bool pr = false, pl = false;
  rep.right_indices = detail::right_indices(P, static_cast<int>(P.cols()) - rep.normal_rank,
                                            max_degree, tol, sr, pr);
  rep.left_indices = detail::right_indices(transpose(P), static_cast<int>(P.rows()) - rep.normal_rank,
                                           max_degree, tol, sl, pl);
  rep.degrees_searched = std::max(sr, sl);
  rep.partial = pr || pl;
  return rep;
}

}  // namespace strukt
