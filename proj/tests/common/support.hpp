#pragma once

#include <ostream>
#include <random>

#include "strukt/linearize.hpp"

namespace strukt {

inline void PrintTo(StructureKind kind, std::ostream* os) { *os << kind_name(kind); }

}  // namespace strukt

namespace test {

using namespace strukt;

// Structured polynomial with small integer entries, so every half-weight
// appearing in a linearization is exact in binary floating point.
inline PolyR integer_structured(Index n, int g, StructureKind kind, std::uint64_t seed) {
  Rng rng = make_rng(seed, 99);
  std::uniform_int_distribution<int> d(-9, 9);
  PolyR p(n, n, g);
  for (int i = 0; i <= g; ++i)
    for (Index c = 0; c < n; ++c)
      for (Index r = 0; r < n; ++r) p.coeff(i)(r, c) = 2.0 * d(rng);
  return structure_project(p, kind);
}

// Block builder for pencils lambda*A1 + A0 of (blocks*n) square size.
struct BlockPencil {
  Index n;
  PolyR p;
  BlockPencil(Index n_, int blocks) : n(n_), p(blocks * n_, blocks * n_, 1) {}
  BlockPencil& put(int i, int j, const MatR& lam, const MatR& cst) {
    p.coeff(1).block(i * n, j * n, n, n) += lam;
    p.coeff(0).block(i * n, j * n, n, n) += cst;
    return *this;
  }
  BlockPencil& lam(int i, int j, const MatR& a) { return put(i, j, a, MatR::Zero(n, n)); }
  BlockPencil& cst(int i, int j, const MatR& a) { return put(i, j, MatR::Zero(n, n), a); }
};

inline MatR eye(Index n) { return MatR::Identity(n, n); }

// Expected grade-7 stacked pencils written out block by block: the placed M, its
// structured average, and the full block Kronecker pencil.
struct Grade7Display {
  PolyR placed, averaged, full;
};

inline Grade7Display grade7_display(const PolyR& p, StructureKind kind) {
  const Index n = p.rows();
  auto P = [&](int i) { return MatR(p.coeff(i)); };
  const MatR I = eye(n);
  BlockPencil m(n, 4), half(n, 4), full(n, 7);
  switch (kind) {
    case StructureKind::symmetric:
      m.lam(0, 0, P(7)).put(1, 0, P(6), P(5)).cst(1, 1, P(4)).cst(1, 2, P(3)).cst(2, 2, P(2));
      m.cst(3, 2, P(1)).cst(3, 3, P(0));
      half.lam(0, 0, P(7)).put(0, 1, P(6) / 2, P(5) / 2).put(1, 0, P(6) / 2, P(5) / 2).cst(1, 1, P(4));
      half.cst(1, 2, P(3) / 2).cst(2, 1, P(3) / 2).cst(2, 2, P(2)).cst(2, 3, P(1) / 2).cst(3, 2, P(1) / 2);
      half.cst(3, 3, P(0));
      full.cst(0, 4, -I).lam(1, 4, I).cst(1, 5, -I).lam(2, 5, I).cst(2, 6, -I).lam(3, 6, I);
      break;
    case StructureKind::palindromic:
      m.cst(0, 2, P(1)).cst(0, 3, P(0)).cst(1, 1, P(3)).cst(1, 2, P(2)).lam(2, 0, P(6));
      m.put(2, 1, P(5), P(4)).lam(3, 0, P(7));
      half.cst(0, 2, P(1)).cst(0, 3, P(0)).put(1, 1, P(4) / 2, P(3) / 2).put(1, 2, P(3) / 2, P(2));
      half.lam(2, 0, P(6)).put(2, 1, P(5), P(4) / 2).lam(3, 0, P(7));
      full.lam(0, 4, -I).cst(1, 4, I).lam(1, 5, -I).cst(2, 5, I).lam(2, 6, -I).cst(3, 6, I);
      break;
    case StructureKind::even:
      m.lam(0, 0, -P(7)).lam(1, 0, P(6)).put(1, 1, P(5), P(4)).cst(1, 2, P(3)).cst(2, 2, -P(2));
      m.put(3, 3, P(1), P(0));
      half.lam(0, 0, -P(7)).lam(0, 1, -P(6) / 2).lam(1, 0, P(6) / 2).put(1, 1, P(5), P(4));
      half.cst(1, 2, P(3) / 2).cst(2, 1, -P(3) / 2).cst(2, 2, -P(2)).put(3, 3, P(1), P(0));
      full.cst(0, 4, -I).lam(1, 4, -I).cst(1, 5, -I).lam(2, 5, -I).cst(2, 6, -I).lam(3, 6, -I);
      break;
    default:
      throw InvalidArgument("no grade-7 display for this structure");
  }
  full.p.set_block(0, 0, half.p);
  full.cst(4, 0, -I).lam(4, 1, I).cst(5, 1, -I).lam(5, 2, I).cst(6, 2, -I).lam(6, 3, I);
  return {m.p, half.p, full.p};
}

// Expected grade-5 (anti)tridiagonal pencils, in block Kronecker
// form and in the permuted tridiagonal shape. s is the parity of the kind.
struct Grade5Display {
  PolyR kron, tri;
};

inline Grade5Display grade5_display(const PolyR& p, StructureKind kind) {
  const Index n = p.rows();
  auto P = [&](int i) { return MatR(p.coeff(i)); };
  const MatR I = eye(n);
  const double s = kind_parity(kind);
  BlockPencil kron(n, 5), tri(n, 5);
  switch (kind_family(kind)) {
    case KindFamily::transpose:
      kron.put(0, 0, P(5), P(4)).put(1, 1, P(3), P(2)).put(2, 2, P(1), P(0));
      kron.cst(0, 3, -s * I).lam(1, 3, s * I).cst(1, 4, -s * I).lam(2, 4, s * I);
      tri.put(0, 0, P(5), P(4)).cst(0, 1, -s * I).cst(1, 0, -I).lam(1, 2, I).lam(2, 1, s * I);
      tri.put(2, 2, P(3), P(2)).cst(2, 3, -s * I).cst(3, 2, -I).lam(3, 4, I).lam(4, 3, s * I);
      tri.put(4, 4, P(1), P(0));
      break;
    case KindFamily::reversal:
      kron.put(0, 2, P(1), P(0)).put(1, 1, P(3), P(2)).put(2, 0, P(5), P(4));
      kron.lam(0, 3, -s * I).cst(1, 3, s * I).lam(1, 4, -s * I).cst(2, 4, s * I);
      tri.lam(0, 3, -s * I).put(0, 4, P(1), P(0)).cst(1, 2, -I).lam(1, 4, I).lam(2, 1, -s * I);
      tri.put(2, 2, P(3), P(2)).cst(2, 3, s * I).cst(3, 0, -I).lam(3, 2, I).put(4, 0, P(5), P(4));
      tri.cst(4, 1, s * I);
      break;
    case KindFamily::alternating:
      kron.put(0, 0, P(5), P(4)).put(1, 1, -P(3), -P(2)).put(2, 2, P(1), P(0));
      kron.cst(0, 3, -s * I).lam(1, 3, -s * I).cst(1, 4, -s * I).lam(2, 4, -s * I);
      tri.put(0, 0, P(5), P(4)).cst(0, 1, -s * I).cst(1, 0, -I).lam(1, 2, I).lam(2, 1, -s * I);
      tri.put(2, 2, -P(3), -P(2)).cst(2, 3, -s * I).cst(3, 2, -I).lam(3, 4, I).lam(4, 3, -s * I);
      tri.put(4, 4, P(1), P(0));
      break;
  }
  kron.cst(3, 0, -I).lam(3, 1, I).cst(4, 1, -I).lam(4, 2, I);
  return {kron.p, tri.p};
}

inline PolyR permuted(const PolyR& L, const MatR& Pi) {
  return L.map([&](const MatR& c) { return MatR(Pi * c * Pi.transpose()); });
}

}  // namespace test
