#pragma once

#include <string_view>

#include "strukt/minbases.hpp"
#include "strukt/polycore.hpp"

namespace strukt {

enum class Placement { tridiagonal, stacked };

std::string_view placement_name(Placement p);
Placement parse_placement(std::string_view name);

// Sign s with recover = s * (M_A[Lambda_k]^* (x) I) M (Lambda_k (x) I) for the
// canonical placements: (-1)^k for skew-symmetric, anti-palindromic and odd.
inline int recover_sign(StructureKind kind, int k) {
  return (kind_parity(kind) < 0 && k % 2 == 1) ? -1 : 1;
}

template <FieldScalar S>
struct BlockKroneckerPencil {
  Mat<S> L0, L1;  // lambda L1 + L0
  int k = 0;
  Index n = 0;
  StructureKind kind = StructureKind::symmetric;
  int sign = 1;

  Index size() const { return L0.rows(); }
  Index m_size() const { return (k + 1) * n; }
  Mat<S> M0() const { return L0.topLeftCorner(m_size(), m_size()); }
  Mat<S> M1() const { return L1.topLeftCorner(m_size(), m_size()); }
  MatrixPolynomial<S> M() const { return MatrixPolynomial<S>::pencil(M0(), M1()); }
  MatrixPolynomial<S> pencil() const { return MatrixPolynomial<S>::pencil(L0, L1); }
};

inline int half_grade(int g) {
  if (g < 1 || g % 2 == 0) throw InvalidArgument("odd grade required");
  return (g - 1) / 2;
}

namespace detail {

// Adds w * lambda^deg * P_l into block (i, j) of M (0-based block indices).
template <FieldScalar S>
void place(MatrixPolynomial<S>& M, const MatrixPolynomial<S>& P, Index n, int i, int j, int deg,
           int l, double w) {
  M.coeff(deg).block(i * n, j * n, n, n) += S(w) * P.coeff(l);
}

template <FieldScalar S>
void check_square_odd(const MatrixPolynomial<S>& P) {
  if (P.rows() != P.cols()) throw InvalidArgument("square polynomial required");
  half_grade(P.grade());
}

}  // namespace detail

// Block diagonal (transpose and alternating kinds) or block antidiagonal
// (palindromic kinds) M(lambda), scaled by sigma.
template <FieldScalar S>
MatrixPolynomial<S> placement_tridiagonal(const MatrixPolynomial<S>& P, StructureKind kind,
                                          int sigma = 1) {
  detail::check_square_odd(P);
  const int g = P.grade(), k = half_grade(g);
  const Index n = P.rows();
  MatrixPolynomial<S> M((k + 1) * n, (k + 1) * n, 1);
  for (int i = 0; i <= k; ++i) {
    switch (kind_family(kind)) {
      case KindFamily::transpose:
        detail::place(M, P, n, i, i, 1, g - 2 * i, sigma);
        detail::place(M, P, n, i, i, 0, g - 2 * i - 1, sigma);
        break;
      case KindFamily::alternating: {
        double w = ((k - i) % 2 == 0 ? 1.0 : -1.0) * sigma;
        detail::place(M, P, n, i, i, 1, g - 2 * i, w);
        detail::place(M, P, n, i, i, 0, g - 2 * i - 1, w);
        break;
      }
      case KindFamily::reversal:
        detail::place(M, P, n, i, k - i, 1, 2 * i + 1, sigma);
        detail::place(M, P, n, i, k - i, 0, 2 * i, sigma);
        break;
    }
  }
  return M;
}

// Staircase placements; at grade 7 these are the three worked grade-7 layouts.
template <FieldScalar S>
MatrixPolynomial<S> placement_stacked(const MatrixPolynomial<S>& P, StructureKind kind,
                                      int sigma = 1) {
  detail::check_square_odd(P);
  const int g = P.grade(), k = half_grade(g);
  const Index n = P.rows();
  MatrixPolynomial<S> M((k + 1) * n, (k + 1) * n, 1);
  if (k == 0) return placement_tridiagonal(P, kind, sigma);
  switch (kind_family(kind)) {
    case KindFamily::transpose:
      detail::place(M, P, n, 0, 0, 1, g, sigma);
      detail::place(M, P, n, 1, 0, 1, g - 1, sigma);
      detail::place(M, P, n, 1, 0, 0, g - 2, sigma);
      for (int j = 2; j <= k; ++j) detail::place(M, P, n, 1, j - 1, 0, 2 * k - j, sigma);
      for (int i = 3; i <= k + 1; ++i) detail::place(M, P, n, i - 1, k - 1, 0, k + 2 - i, sigma);
      detail::place(M, P, n, k, k, 0, 0, sigma);
      break;
    case KindFamily::alternating: {
      auto w = [&](int i) { return ((k - i) % 2 == 0 ? 1.0 : -1.0) * sigma; };  // 0-based row
      detail::place(M, P, n, 0, 0, 1, g, w(0));
      detail::place(M, P, n, 1, 0, 1, g - 1, w(1));
      detail::place(M, P, n, 1, 1, 1, g - 2, w(1));
      detail::place(M, P, n, 1, 1, 0, g - 3, w(1));
      if (k >= 2) {
        for (int j = 3; j <= k; ++j) detail::place(M, P, n, 1, j - 1, 0, 2 * k - j, w(1));
        for (int i = 3; i <= k; ++i) detail::place(M, P, n, i - 1, k - 1, 0, k + 2 - i, w(i - 1));
        detail::place(M, P, n, k, k, 1, 1, w(k));
        detail::place(M, P, n, k, k, 0, 0, w(k));
      }
      break;
    }
    case KindFamily::reversal:
      for (int t = 0; t <= 2 * k; ++t) {
        int i = k - (t + 1) / 2;  // 0-based
        int j = t / 2;
        int d = k - t;  // i - j
        if (d >= 1) detail::place(M, P, n, i, j, 1, d + k + 1, sigma);
        if (d <= 1) detail::place(M, P, n, i, j, 0, d + k, sigma);
      }
      break;
  }
  return M;
}

template <FieldScalar S>
MatrixPolynomial<S> placement(const MatrixPolynomial<S>& P, StructureKind kind, Placement how,
                              int sigma = 1) {
  return how == Placement::tridiagonal ? placement_tridiagonal(P, kind, sigma)
                                       : placement_stacked(P, kind, sigma);
}

// Largest residual of the block-sum conditions over l = 0..g.
template <FieldScalar S>
double placement_residual(const MatrixPolynomial<S>& M, const MatrixPolynomial<S>& P,
                          StructureKind kind) {
  detail::check_square_odd(P);
  const int g = P.grade(), k = half_grade(g);
  const Index n = P.rows();
  if (M.rows() != (k + 1) * n || M.cols() != (k + 1) * n || M.grade() > 1)
    throw InvalidArgument("M must be a (k+1)n square pencil");
  const MatrixPolynomial<S> Mp = M.with_grade(1);
  std::vector<Mat<S>> sums(g + 1, Mat<S>::Zero(n, n));
  for (int i = 1; i <= k + 1; ++i)
    for (int j = 1; j <= k + 1; ++j) {
      Mat<S> b0 = Mp.coeff(0).block((i - 1) * n, (j - 1) * n, n, n);
      Mat<S> b1 = Mp.coeff(1).block((i - 1) * n, (j - 1) * n, n, n);
      int l1, l0;
      double w = 1;
      if (kind_family(kind) == KindFamily::reversal) {
        l1 = i - j + k + 1;
        l0 = i - j + k;
      } else {
        l1 = g + 2 - i - j;
        l0 = g + 1 - i - j;
        if (kind_family(kind) == KindFamily::alternating) w = ((k - i + 1) % 2 == 0) ? 1.0 : -1.0;
      }
      sums[l1] += S(w) * b1;
      sums[l0] += S(w) * b0;
    }
  double worst = 0;
  for (int l = 0; l <= g; ++l) worst = std::max(worst, (sums[l] - P.coeff(l)).norm());
  return worst;
}

template <FieldScalar S>
bool check_placement(const MatrixPolynomial<S>& M, const MatrixPolynomial<S>& P,
                     StructureKind kind, double tol = 1e-12) {
  return placement_residual(M, P, kind) <= tol * frob_norm(P);
}

template <FieldScalar S>
MatrixPolynomial<S> symmetrize_M(const MatrixPolynomial<S>& M, StructureKind kind) {
  return structure_project(M.with_grade(1), kind);
}

// M_A[L_k] (x) I_n read off the per-kind table.
template <FieldScalar S>
MatrixPolynomial<S> mobius_Lk(int k, Index n, StructureKind kind) {
  MatrixPolynomial<S> L = build_Lk<S>(k, n);
  if (kind_family(kind) == KindFamily::reversal) std::swap(L.coeff(0), L.coeff(1));
  if (kind_family(kind) == KindFamily::alternating) L.coeff(1) = -L.coeff(1);
  return kind_parity(kind) < 0 ? -L : L;
}

template <FieldScalar S>
BlockKroneckerPencil<S> assemble(const MatrixPolynomial<S>& M, int k, Index n, StructureKind kind,
                                 int sign = 0, double tol = 1e-12) {
  if (k < 0 || n < 1) throw InvalidArgument("assemble needs k >= 0 and n >= 1");
  if (M.rows() != (k + 1) * n || M.cols() != (k + 1) * n || M.degree() > 1)
    throw InvalidArgument("M must be a (k+1)n square pencil");
  const MatrixPolynomial<S> Mp = M.with_grade(1);
  if (!is_structured(Mp, kind, tol)) throw InvalidArgument("M(lambda) is not structured");
  const Index m = (k + 1) * n, size = (2 * k + 1) * n;
  MatrixPolynomial<S> L(size, size, 1);
  L.set_block(0, 0, Mp);
  if (k > 0) {
    L.set_block(0, m, star_adjoint(mobius_Lk<S>(k, n, kind)));
    L.set_block(m, 0, build_Lk<S>(k, n));
  }
  BlockKroneckerPencil<S> out;
  out.L0 = L.coeff(0);
  out.L1 = L.coeff(1);
  out.k = k;
  out.n = n;
  out.kind = kind;
  out.sign = sign == 0 ? recover_sign(kind, k) : sign;
  return out;
}

// Validates the off-diagonal blocks of a stored pencil.
template <FieldScalar S>
BlockKroneckerPencil<S> pencil_from_partition(const MatrixPolynomial<S>& L, int k, Index n,
                                              StructureKind kind, int sign, double tol = 1e-12) {
  if (k < 0 || n < 1 || (sign != 1 && sign != -1)) throw InvalidArgument("bad partition record");
  const Index m = (k + 1) * n, size = (2 * k + 1) * n;
  if (L.rows() != size || L.cols() != size || L.degree() > 1)
    throw InvalidArgument("pencil size does not match the partition record");
  const MatrixPolynomial<S> Lp = L.with_grade(1);
  const double scale = tol * std::max(1.0, frob_norm(Lp));
  if (k > 0) {
    double off = frob_norm(Lp.block(m, 0, k * n, m) - build_Lk<S>(k, n)) +
                 frob_norm(Lp.block(0, m, m, k * n) - star_adjoint(mobius_Lk<S>(k, n, kind))) +
                 frob_norm(Lp.block(m, m, k * n, k * n));
    if (off > scale) throw InvalidArgument("pencil is not a block Kronecker pencil of this partition");
  }
  BlockKroneckerPencil<S> out;
  out.L0 = Lp.coeff(0);
  out.L1 = Lp.coeff(1);
  out.k = k;
  out.n = n;
  out.kind = kind;
  out.sign = sign;
  if (!is_structured(out.M(), kind, tol)) throw InvalidArgument("M(lambda) is not structured");
  return out;
}

// (M_A[N^T])^* Mid N^T, the polynomial represented by a block minimal bases
// pencil with (1,1) block Mid and dual basis N.
template <FieldScalar S>
MatrixPolynomial<S> sandwich(const MatrixPolynomial<S>& N, const MatrixPolynomial<S>& Mid,
                             StructureKind kind) {
  const MatrixPolynomial<S> Nt = transpose(N);
  const MatrixPolynomial<S> left = star_adjoint(mobius(Nt, kind_mobius(kind)));
  return multiply(multiply(left, Mid), Nt);
}

template <FieldScalar S>
MatrixPolynomial<S> recover(const BlockKroneckerPencil<S>& L) {
  MatrixPolynomial<S> P = sandwich(build_Lambda<S>(L.k, L.n), L.M(), L.kind);
  return L.sign == 1 ? P : -P;
}

// placement -> symmetrization -> assembly.
template <FieldScalar S>
BlockKroneckerPencil<S> linearize(const MatrixPolynomial<S>& P, StructureKind kind,
                                  Placement how = Placement::tridiagonal, int sigma = 1,
                                  double tol = 1e-12) {
  if (sigma != 1 && sigma != -1) throw InvalidArgument("sigma must be +1 or -1");
  detail::check_square_odd(P);
  if (!is_structured(P, kind, tol))
    throw InvalidArgument(std::string("polynomial is not ") + std::string(kind_name(kind)));
  const int k = half_grade(P.grade());
  MatrixPolynomial<S> M = symmetrize_M(placement(P, kind, how, sigma), kind);
  return assemble(M, k, P.rows(), kind, sigma * recover_sign(kind, k), tol);
}

// Pi with Pi L Pi^T block (anti)tridiagonal: M-blocks at even positions,
// L_k blocks interleaved (in reverse order for the palindromic kinds).
MatR permutation_to_tridiagonal(int k, Index n, StructureKind kind = StructureKind::symmetric);

}  // namespace strukt
