#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "strukt/linalg.hpp"
#include "strukt/minbases.hpp"
#include "strukt/perturbation.hpp"

namespace strukt {

template <FieldScalar S>
struct PerturbedSelectors {
  Mat<S> Ehat;  // -E_kn + dA21
  Mat<S> Fhat;  // F_kn + dB21
};

template <FieldScalar S = double>
PerturbedSelectors<S> unperturbed_selectors(int k, Index n) {
  SelectorMatrices sel = selector_matrices(k, n);
  return {(-sel.E).template cast<S>(), sel.F.template cast<S>()};
}

template <FieldScalar S>
PerturbedSelectors<S> perturbed_selectors(const StructuredPerturbation<S>& p) {
  PerturbedSelectors<S> s = unperturbed_selectors<S>(p.k, p.n);
  s.Ehat += p.dA21;
  s.Fhat += p.dB21;
  return s;
}

// Matrix of (Y, W) -> (Y (b Fh + d Eh)^* + Eh W, Y (a Fh + c Eh)^* + Fh W) acting on
// [vec Y; vec W] with W = Z^*.
template <FieldScalar S, FieldScalar T>
Mat<S> sylvester_operator(const Mobius<T>& A, const PerturbedSelectors<S>& sel) {
  const Index r = sel.Ehat.rows();
  const Mat<S> I = Mat<S>::Identity(r, r);
  const Mat<S> B0 = S(A.b) * sel.Fhat + S(A.d) * sel.Ehat;
  const Mat<S> B1 = S(A.a) * sel.Fhat + S(A.c) * sel.Ehat;
  const Mat<S> top_left = kron<S>(B0.conjugate(), I), top_right = kron<S>(I, sel.Ehat);
  const Mat<S> bot_left = kron<S>(B1.conjugate(), I), bot_right = kron<S>(I, sel.Fhat);
  Mat<S> out(2 * top_left.rows(), top_left.cols() + top_right.cols());
  out << top_left, top_right, bot_left, bot_right;
  return out;
}

MatR build_TA(int k, Index n, StructureKind kind);
MatR build_TA_reduced(int k, StructureKind kind);
double sigma_min_formula(int k);

// (pi/4k)(1 - 3k ||dL||), valid for ||dL|| < 1/(3k).
double delta_lower_bound(int k, double normDL);

enum class DeltaMode { svd, certified };

template <FieldScalar S>
struct SylvesterPair {
  Mat<S> Y, Z;
  double delta = 0;
  double residual = 0;
};

template <FieldScalar S, FieldScalar T>
std::pair<Mat<S>, Mat<S>> sylvester_apply(const Mobius<T>& A, const PerturbedSelectors<S>& sel,
                                          const Mat<S>& Y, const Mat<S>& Z) {
  const Mat<S> B0 = S(A.b) * sel.Fhat + S(A.d) * sel.Ehat;
  const Mat<S> B1 = S(A.a) * sel.Fhat + S(A.c) * sel.Ehat;
  return {Y * B0.adjoint() + sel.Ehat * Z.adjoint(), Y * B1.adjoint() + sel.Fhat * Z.adjoint()};
}

// Reusable minimum-norm solver for one set of selectors.
template <FieldScalar S>
class SylvesterSolver {
 public:
  template <FieldScalar T>
  SylvesterSolver(const Mobius<T>& A, const PerturbedSelectors<S>& sel, double delta)
      : sel_(sel), delta_(delta), solver_(init(A, sel, delta), delta * 1e-3) {
    b0_ = S(A.b) * sel.Fhat + S(A.d) * sel.Ehat;
    b1_ = S(A.a) * sel.Fhat + S(A.c) * sel.Ehat;
  }

  SylvesterPair<S> solve(const Mat<S>& C0, const Mat<S>& C1) const {
    const Index r = sel_.Ehat.rows(), c = sel_.Ehat.cols();
    if (C0.rows() != r || C0.cols() != r || C1.rows() != r || C1.cols() != r)
      throw InvalidArgument("right-hand sides must be kn x kn");
    Mat<S> rhs(2 * r * r, 1);
    rhs << vec(C0), vec(C1);
    Mat<S> x = solver_.solve(rhs);
    SylvesterPair<S> out;
    out.Y = unvec<S>(x.topRows(r * c), r, c);
    out.Z = unvec<S>(x.bottomRows(c * r), c, r).adjoint();
    out.delta = delta_;
    Mat<S> R0 = out.Y * b0_.adjoint() + sel_.Ehat * out.Z.adjoint() - C0;
    Mat<S> R1 = out.Y * b1_.adjoint() + sel_.Fhat * out.Z.adjoint() - C1;
    out.residual = pair_norm(R0, R1);
    return out;
  }

  double delta() const { return delta_; }

 private:
  template <FieldScalar T>
  static Mat<S> init(const Mobius<T>& A, const PerturbedSelectors<S>& sel, double delta) {
    if (!(delta > 0)) throw PreconditionError("singular value gap delta is not positive", delta, 0.0);
    return sylvester_operator(A, sel);
  }

  PerturbedSelectors<S> sel_;
  double delta_;
  MinNormSolver<S> solver_;
  Mat<S> b0_, b1_;
};

// sigma_min(T_A) - ||T - T_A||_2 by dense SVD, with T_A the unperturbed operator.
template <FieldScalar S, FieldScalar T>
double sylvester_delta(const Mobius<T>& A, const PerturbedSelectors<S>& sel) {
  const Index r = sel.Ehat.rows(), c = sel.Ehat.cols();
  const Index n = c - r;
  const int k = static_cast<int>(r / n);
  const Mat<S> TA = sylvester_operator(A, unperturbed_selectors<S>(k, n));
  const Mat<S> T_ = sylvester_operator(A, sel);
  return sigma_min<S>(TA) - spectral_norm<S>(Mat<S>(T_ - TA));
}

template <FieldScalar S, FieldScalar T>
SylvesterPair<S> min_norm_sylvester_solve(const Mobius<T>& A, const PerturbedSelectors<S>& sel,
                                          const Mat<S>& C0, const Mat<S>& C1,
                                          std::optional<double> delta = std::nullopt) {
  const double d = delta ? *delta : sylvester_delta(A, sel);
  SylvesterSolver<S> solver(A, sel, d);
  SylvesterPair<S> out = solver.solve(C0, C1);
  if (!(out.residual <= 1e-12 * std::max(pair_norm(C0, C1), 1e-300)))
    throw NumericalError("Sylvester residual " + std::to_string(out.residual) + " above tolerance");
  return out;
}

template <FieldScalar S>
SylvesterPair<S> min_norm_sylvester_solve(StructureKind kind, const PerturbedSelectors<S>& sel,
                                          const Mat<S>& C0, const Mat<S>& C1) {
  return min_norm_sylvester_solve(kind_mobius(kind), sel, C0, C1);
}

// X = (Y + Z)/2; requires lambda C1 + C0 to be M_A-structured.
template <FieldScalar S, FieldScalar T>
Mat<S> star_from_sylvester(const Mobius<T>& A, const Mat<S>& C0, const Mat<S>& C1, const Mat<S>& Y,
                           const Mat<S>& Z, double tol = 1e-12) {
  const MatrixPolynomial<S> rhs = MatrixPolynomial<S>::pencil(C0, C1);
  const double res = structure_residual(rhs, A);
  if (!(res <= tol * std::max(1.0, frob_norm(rhs))))
    throw PreconditionError("right-hand side pencil is not structured", res, tol);
  return (Y + Z) / S(2);
}

// Residual pair of X (b Fh + d Eh)^* + Eh X^* = C0, X (a Fh + c Eh)^* + Fh X^* = C1.
template <FieldScalar S, FieldScalar T>
double star_sylvester_residual(const Mobius<T>& A, const PerturbedSelectors<S>& sel,
                               const Mat<S>& C0, const Mat<S>& C1, const Mat<S>& X) {
  auto [R0, R1] = sylvester_apply(A, sel, X, X);
  return pair_norm(Mat<S>(R0 - C0), Mat<S>(R1 - C1));
}

template <FieldScalar S>
struct FixedPointState {
  Mat<S> X;
  std::vector<double> residual_history;  // quadratic-system residual after each step
  std::vector<double> x_norms;           // ||X_i||_F
  std::vector<double> yz_norms;          // ||(Y_i, Z_i)||_F
  double delta = 0, theta = 0, omega = 0, kappa1 = 0, kappa = 0, rho0 = 0;
  double contraction = 0;  // 2 omega (1 + kappa) theta / delta^2
  double residual = 0;
  int iterations = 0;

  double iterate_bound() const { return rho0 * (1 + kappa); }
};

struct FixedPointOptions {
  double tol = -1;  // < 0: 1e-13 * theta
  int max_iter = 100;
  DeltaMode delta_mode = DeltaMode::svd;
};

inline double kappa_limit(double kappa1) {
  return 2 * kappa1 / (1 - 2 * kappa1 + std::sqrt(1 - 4 * kappa1));
}

// Residual of [X I](L + dL)[X^*; I] = 0, split into constant and lambda parts.
template <FieldScalar S>
double quadratic_residual(const StructuredPerturbation<S>& p, const Mat<S>& M0, const Mat<S>& M1,
                          const Mat<S>& X) {
  const Mobius<double> A = kind_mobius(p.kind);
  const PerturbedSelectors<S> sel = perturbed_selectors(p);
  auto [R0, R1] = sylvester_apply(A, sel, X, X);
  R0 += p.dA22 + X * (M0 + p.dA11) * X.adjoint();
  R1 += p.dB22 + X * (M1 + p.dB11) * X.adjoint();
  return pair_norm(R0, R1);
}

template <FieldScalar S>
FixedPointState<S> quadratic_fixed_point(const StructuredPerturbation<S>& p, const Mat<S>& M0,
                                         const Mat<S>& M1, StructureKind kind,
                                         const FixedPointOptions& opt = {}) {
  if (p.kind != kind) throw InvalidArgument("perturbation kind differs from the pencil kind");
  if (p.k < 1) throw InvalidArgument("the fixed point needs k >= 1");
  const Mobius<double> A = kind_mobius(kind);
  const PerturbedSelectors<S> sel = perturbed_selectors(p);
  const Mat<S> Mh0 = M0 + p.dA11, Mh1 = M1 + p.dB11;

  FixedPointState<S> st;
  st.theta = pair_norm(p.dA22, p.dB22);
  st.omega = pair_norm(Mh0, Mh1);
  st.delta = opt.delta_mode == DeltaMode::svd ? sylvester_delta(A, sel)
                                              : delta_lower_bound(p.k, p.norm());
  if (!(st.delta > 0)) throw PreconditionError("singular value gap delta is not positive", st.delta, 0.0);
  st.kappa1 = st.theta * st.omega / (st.delta * st.delta);
  if (!(st.kappa1 < 0.25))
    throw PreconditionError("fixed-point condition theta*omega/delta^2 < 1/4 fails", st.kappa1, 0.25);
  st.kappa = kappa_limit(st.kappa1);
  st.rho0 = st.theta / st.delta;
  st.contraction = 2 * st.omega * (1 + st.kappa) * st.theta / (st.delta * st.delta);

  const Index r = p.k * p.n, c = (p.k + 1) * p.n;
  st.X = Mat<S>::Zero(r, c);
  if (st.theta == 0) {
    st.iterations = 1;
    st.x_norms.push_back(0);
    st.yz_norms.push_back(0);
    st.residual_history.push_back(0);
    return st;
  }
  const double tol = opt.tol < 0 ? 1e-13 * st.theta : opt.tol;
  SylvesterSolver<S> solver(A, sel, st.delta);
  int stalled = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iter; ++it) {
    Mat<S> C0 = -p.dA22 - st.X * Mh0 * st.X.adjoint();
    Mat<S> C1 = -p.dB22 - st.X * Mh1 * st.X.adjoint();
    SylvesterPair<S> yz = solver.solve(C0, C1);
    st.X = (yz.Y + yz.Z) / S(2);
    st.iterations = it + 1;
    st.x_norms.push_back(st.X.norm());
    st.yz_norms.push_back(pair_norm(yz.Y, yz.Z));
    st.residual = quadratic_residual(p, M0, M1, st.X);
    st.residual_history.push_back(st.residual);
    if (st.residual <= tol) return st;
    if (st.residual < 0.5 * best) {
      best = st.residual;
      stalled = 0;
    } else if (++stalled >= 5) {
      break;
    }
  }
  throw NumericalError("fixed point did not reach residual " + std::to_string(tol) + " (last " +
                       std::to_string(st.residual) + ")");
}

}  // namespace strukt
