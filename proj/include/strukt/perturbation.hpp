#pragma once

#include "strukt/linearize.hpp"
#include "strukt/polycore.hpp"

namespace strukt {

// Natural blocks of a structured pencil perturbation. The (1,2) block is
// implied by the (2,1) block and the Mobius matrix of the kind.
template <FieldScalar S>
struct StructuredPerturbation {
  Mat<S> dA11, dB11;  // (k+1)n square
  Mat<S> dA21, dB21;  // kn x (k+1)n
  Mat<S> dA22, dB22;  // kn square
  StructureKind kind = StructureKind::symmetric;
  int k = 0;
  Index n = 0;

  static StructuredPerturbation zero(int k, Index n, StructureKind kind) {
    const Index m = (k + 1) * n, r = k * n;
    return {Mat<S>::Zero(m, m), Mat<S>::Zero(m, m), Mat<S>::Zero(r, m),
            Mat<S>::Zero(r, m), Mat<S>::Zero(r, r), Mat<S>::Zero(r, r), kind, k, n};
  }

  // lambda (a dB21 + c dA21)^* + (b dB21 + d dA21)^*
  MatrixPolynomial<S> block12() const {
    const Mobius<double> A = kind_mobius(kind);
    return MatrixPolynomial<S>::pencil((S(A.b) * dB21 + S(A.d) * dA21).adjoint(),
                                       (S(A.a) * dB21 + S(A.c) * dA21).adjoint());
  }

  MatrixPolynomial<S> pencil() const {
    const Index m = (k + 1) * n, r = k * n;
    MatrixPolynomial<S> L(m + r, m + r, 1);
    L.set_block(0, 0, MatrixPolynomial<S>::pencil(dA11, dB11));
    L.set_block(m, 0, MatrixPolynomial<S>::pencil(dA21, dB21));
    L.set_block(m, m, MatrixPolynomial<S>::pencil(dA22, dB22));
    if (r > 0) L.set_block(0, m, block12());
    return L;
  }

  double norm() const { return frob_norm(pencil()); }

  // Reads the (1,1), (2,1) and (2,2) blocks; the (1,2) block is not consulted.
  static StructuredPerturbation from_pencil(const MatrixPolynomial<S>& dL, int k, Index n,
                                            StructureKind kind) {
    const Index m = (k + 1) * n, r = k * n;
    if (dL.rows() != m + r || dL.cols() != m + r || dL.degree() > 1)
      throw InvalidArgument("perturbation does not match the partition");
    const MatrixPolynomial<S> p = dL.with_grade(1);
    return {p.coeff(0).topLeftCorner(m, m),    p.coeff(1).topLeftCorner(m, m),
            p.coeff(0).bottomLeftCorner(r, m), p.coeff(1).bottomLeftCorner(r, m),
            p.coeff(0).bottomRightCorner(r, r), p.coeff(1).bottomRightCorner(r, r),
            kind, k, n};
  }
};

template <FieldScalar S = double>
StructuredPerturbation<S> random_structured_perturbation(int k, Index n, StructureKind kind,
                                                         double target_norm, std::uint64_t seed) {
  if (!(target_norm > 0)) throw InvalidArgument("target norm must be positive");
  const Index size = (2 * k + 1) * n;
  Rng rng = make_rng(seed, 0x70657274ULL);
  MatrixPolynomial<S> dL = structure_project(random_polynomial<S>(size, size, 1, rng), kind);
  auto p = StructuredPerturbation<S>::from_pencil(dL, k, n, kind);
  const S s(target_norm / p.norm());
  for (Mat<S>* b : {&p.dA11, &p.dB11, &p.dA21, &p.dB21, &p.dA22, &p.dB22}) *b *= s;
  return p;
}

}  // namespace strukt
