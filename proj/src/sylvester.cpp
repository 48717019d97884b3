#include "strukt/sylvester.hpp"

namespace strukt {

MatR build_TA(int k, Index n, StructureKind kind) {
  if (k < 1) throw InvalidArgument("T_A needs k >= 1");
  return sylvester_operator(kind_mobius(kind), unperturbed_selectors<double>(k, n));
}

MatR build_TA_reduced(int k, StructureKind kind) {
  if (k < 1) throw InvalidArgument("reduced T_A needs k >= 1");
  const Mobius<double> A = kind_mobius(kind);
  const SelectorMatrices s = selector_matrices(k, 1);
  const MatR I = MatR::Identity(k, k);
  const MatR top_left = kron<double>(I, A.b * s.F - A.d * s.E);
  const MatR top_right = -kron<double>(s.E, I);
  const MatR bot_left = kron<double>(I, A.a * s.F - A.c * s.E);
  const MatR bot_right = kron<double>(s.F, I);
  MatR T(2 * k * k, 2 * k * (k + 1));
  T << top_left, top_right, bot_left, bot_right;
  return T;
}

double sigma_min_formula(int k) {
  if (k < 1) throw InvalidArgument("sigma_min_formula needs k >= 1");
  return 2.0 * std::sin(std::numbers::pi / (4.0 * k));
}

double delta_lower_bound(int k, double normDL) {
  if (k < 1) throw InvalidArgument("delta_lower_bound needs k >= 1");
  const double limit = 1.0 / (3.0 * k);
  if (!(normDL < limit)) throw PreconditionError("perturbation norm not below 1/(3k)", normDL, limit);
  return std::numbers::pi / (4.0 * k) * (1.0 - 3.0 * k * normDL);
}

}  // namespace strukt
