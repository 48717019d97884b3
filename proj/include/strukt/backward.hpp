#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "strukt/io.hpp"
#include "strukt/linearize.hpp"
#include "strukt/minbases.hpp"
#include "strukt/perturbation.hpp"
#include "strukt/sylvester.hpp"

namespace strukt {

enum class ThresholdMode { certified, empirical };

std::string_view mode_name(ThresholdMode m);
ThresholdMode parse_mode(std::string_view name);

// (pi/16)^2 / k^2 / (1 + ||M||)
inline double congruence_threshold(int k, double normM) {
  const double c = std::numbers::pi / 16.0;
  return c * c / (double(k) * k) / (1.0 + normM);
}

// (pi/16)^2 / (k+1)^(5/2) / (1 + ||M||)
inline double main_threshold(int k, double normM) {
  const double c = std::numbers::pi / 16.0;
  return c * c / std::pow(k + 1.0, 2.5) / (1.0 + normM);
}

inline double x_bound(int k, double normDL) { return 3.0 * k * normDL / (1.0 - 3.0 * k * normDL); }

inline double dL21_tilde_bound(int k, double normDL, double normM) {
  return normDL * (1.0 + 3.0 * k * (normM + normDL) / (1.0 - 3.0 * k * normDL));
}

inline double dR_bound(int k, double normDL21t) {
  return 6.0 * std::numbers::sqrt2 * (k + 1) / std::numbers::pi * normDL21t;
}

inline double dP_product_bound(int k, double normDL11, double normM, double normDR) {
  return std::sqrt(k + 1.0) * (5.0 * normDL11 + 4.0 * normM * normDR);
}

template <FieldScalar S>
struct CongruenceResult {
  Mat<S> X;
  MatrixPolynomial<S> Ltilde;  // (2,2) block zeroed
  FixedPointState<S> fixed_point;
  double block22_residual = 0;  // before zeroing
  double structure_residual = 0;
  double norm_dL21_tilde = 0;
};

template <FieldScalar S>
CongruenceResult<S> congruence_zero_block(const BlockKroneckerPencil<S>& L,
                                          const StructuredPerturbation<S>& pert,
                                          ThresholdMode mode = ThresholdMode::certified,
                                          double tol = 1e-12, const FixedPointOptions& fp = {}) {
  if (pert.k != L.k || pert.n != L.n || pert.kind != L.kind)
    throw InvalidArgument("perturbation partition differs from the pencil");
  const int k = L.k;
  const Index n = L.n, m = (k + 1) * n, r = k * n, size = m + r;
  const double normDL = pert.norm();
  if (mode == ThresholdMode::certified) {
    const double t = congruence_threshold(k, frob_norm(L.M()));
    if (!(normDL < t)) throw PreconditionError("perturbation above the congruence threshold", normDL, t);
  }
  CongruenceResult<S> out;
  if (k == 0) {
    out.X = Mat<S>::Zero(0, n);
    out.Ltilde = L.pencil() + pert.pencil();
    out.structure_residual = structure_residual(out.Ltilde, L.kind);
    return out;
  }
  out.fixed_point = quadratic_fixed_point(pert, L.M0(), L.M1(), L.kind, fp);
  out.X = out.fixed_point.X;

  Mat<S> left = Mat<S>::Identity(size, size), right = Mat<S>::Identity(size, size);
  left.block(m, 0, r, m) = out.X;
  right.block(0, m, m, r) = out.X.adjoint();
  const MatrixPolynomial<S> Lhat = L.pencil() + pert.pencil();
  out.Ltilde = Lhat.map([&](const Mat<S>& c) { return Mat<S>(left * c * right); });
  out.block22_residual = frob_norm(out.Ltilde.block(m, m, r, r));
  if (!(out.block22_residual <= tol * std::max(1.0, frob_norm(Lhat))))
    throw NumericalError("(2,2) block residual " + std::to_string(out.block22_residual) + " above tolerance");
  for (int i = 0; i <= 1; ++i) out.Ltilde.coeff(i).bottomRightCorner(r, r).setZero();
  out.structure_residual = structure_residual(out.Ltilde, L.kind);
  out.norm_dL21_tilde = frob_norm(out.Ltilde.block(m, 0, r, m) - build_Lk<S>(k, n));
  return out;
}

template <FieldScalar S>
struct Reconstruction {
  MatrixPolynomial<S> P;  // P + dP
  DualBasisPair<S> dual;
  double norm_dR = 0;
};

template <FieldScalar S>
Reconstruction<S> reconstruct_perturbed_polynomial(const MatrixPolynomial<S>& Ltilde, int k, Index n,
                                                   StructureKind kind, int sign,
                                                   ThresholdMode mode = ThresholdMode::certified) {
  const Index m = (k + 1) * n, r = k * n;
  if (Ltilde.rows() != m + r || Ltilde.cols() != m + r) throw InvalidArgument("pencil does not match k and n");
  const MatrixPolynomial<S> L = Ltilde.with_grade(1);
  Reconstruction<S> out;
  if (k == 0) {
    out.P = sign == 1 ? L : -L;
    return out;
  }
  out.dual = dual_basis_complete(L.block(m, 0, r, m), k, n, 1e-12, mode == ThresholdMode::certified);
  out.norm_dR = frob_norm(out.dual.dR);
  MatrixPolynomial<S> P = sandwich(out.dual.N, L.block(0, 0, m, m), kind);
  out.P = sign == 1 ? P : -P;
  return out;
}

struct TheoremBound {
  double threshold = 0;         // admissible ||dL||
  double c_pl = 0;              // multiplier of ||dL|| / ||L||
  double coarse_factor = 0;  // (k+1)^3 sqrt(n), meaningful when ||M|| ~ ||P||
};

TheoremBound theorem_bound(double normP, double normL, double normM, int k, Index n);

template <FieldScalar S>
TheoremBound theorem_bound(const MatrixPolynomial<S>& P, const BlockKroneckerPencil<S>& L) {
  return theorem_bound(frob_norm(P), frob_norm(L.pencil()), frob_norm(L.M()), L.k, L.n);
}

// Per-trial record. The first block of fields is the serialized schema.
struct BackwardErrorReport {
  std::uint64_t seed = 0;
  std::string kind;
  int g = 0;
  long n = 0;
  int k = 0;
  std::string placement;
  double norm_P = 0, norm_L = 0, norm_M = 0, norm_dL = 0;
  bool threshold_ok = false;
  double norm_X = 0, norm_dR = 0, norm_dP = 0;
  double ratio = 0, C_PL = 0, bound = 0;
  bool ratio_le_bound = false, structure_ok = false;
  double eig_chordal_max = 0;
  int iters = 0;
  double wall_ms = 0;

  struct Diagnostics {
    std::string error;
    double theta = 0, delta = 0, kappa1 = 0;
    double fixed_point_residual = 0;
    double block22_residual = 0;
    double x_bound = 0;
    double norm_dL21_tilde = 0, dL21_tilde_bound = 0;
    double dR_bound = 0;
    double dP_structure_residual = 0;
    double dP_product_bound = 0;
    double dual_residual = 0;
    double iterate_max = 0, iterate_bound = 0;
    double coarse_bound = 0;
  } diag;

  bool ok() const { return diag.error.empty(); }
};

struct CertificationOptions {
  ThresholdMode mode = ThresholdMode::certified;
  int sigma = 1;
  bool timings = false;
  bool eigen_check = true;
  unsigned threads = 1;
};

std::vector<BackwardErrorReport> run_certification(const PolyR& P, StructureKind kind, Placement placement,
                                                   const std::vector<double>& pert_norms, int trials,
                                                   std::uint64_t seed, const CertificationOptions& opt = {});

// A certified-mode trial fails when it errored or broke a checked bound.
bool trial_passes(const BackwardErrorReport& r);

const std::vector<std::string>& report_columns();
std::string reports_to_csv(const std::vector<BackwardErrorReport>& reports);
std::vector<BackwardErrorReport> reports_from_csv(const std::string& csv);
Json reports_to_json(const std::vector<BackwardErrorReport>& reports);
std::vector<BackwardErrorReport> reports_from_json(const Json& j);

}  // namespace strukt
