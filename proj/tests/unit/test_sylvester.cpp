#include <gtest/gtest.h>

#include <algorithm>

#include "strukt/sylvester.hpp"

using namespace strukt;

namespace {

std::vector<double> sorted_values(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  return s;
}

TEST(TA, SigmaMinFormula) {
  for (StructureKind kind : kAllKinds)
    for (int k = 1; k <= 5; ++k)
      for (Index n : {1, 2}) {
        const double s = sigma_min<double>(build_TA(k, n, kind));
        EXPECT_NEAR(s, sigma_min_formula(k), 1e-10 * sigma_min_formula(k)) << kind_name(kind) << " k=" << k;
      }
  EXPECT_NEAR(sigma_min_formula(1), std::sqrt(2.0), 1e-15);
}

TEST(TA, ShapeIsUnderdetermined) {
  const MatR T = build_TA(3, 2, StructureKind::even);
  EXPECT_EQ(T.rows(), 2 * 3 * 3 * 4);
  EXPECT_EQ(T.cols(), 2 * 3 * 4 * 4);
  EXPECT_THROW(build_TA(0, 2, StructureKind::even), InvalidArgument);
}

TEST(TA, FullSpectrumIsReducedWithMultiplicityNSquared) {
  for (StructureKind kind : kAllKinds)
    for (int k = 1; k <= 4; ++k) {
      const auto reduced = sorted_values(singular_values<double>(build_TA_reduced(k, kind)));
      for (Index n : {1, 2, 3}) {
        const auto full = sorted_values(singular_values<double>(build_TA(k, n, kind)));
        ASSERT_EQ(full.size(), reduced.size() * n * n);
        for (std::size_t i = 0; i < full.size(); ++i)
          EXPECT_NEAR(full[i], reduced[i / (n * n)], 1e-12) << kind_name(kind) << " k=" << k << " n=" << n;
      }
    }
}

TEST(TA, FullRowRank) {
  for (int k = 1; k <= 4; ++k) {
    const MatR T = build_TA(k, 2, StructureKind::palindromic);
    const auto s = singular_values<double>(T);
    EXPECT_EQ(s.size(), T.rows());
    EXPECT_GT(s.minCoeff(), 0.1);
  }
}

TEST(DeltaBound, SvdGapDominatesLowerBound) {
  for (StructureKind kind : kAllKinds)
    for (int k = 1; k <= 3; ++k)
      for (double eps : {1e-6, 1e-3, 1e-2}) {
        const auto p = random_structured_perturbation<double>(k, 2, kind, eps, 3 * k);
        const double svd = sylvester_delta(kind_mobius(kind), perturbed_selectors(p));
        EXPECT_GE(svd, delta_lower_bound(k, p.norm()));
      }
  EXPECT_THROW(delta_lower_bound(2, 1.0 / 6.0), PreconditionError);
}

TEST(Sylvester, MinNormSolveMatchesPseudoinverse) {
  const StructureKind kind = StructureKind::anti_palindromic;
  const int k = 2;
  const Index n = 2, r = k * n;
  const auto p = random_structured_perturbation<double>(k, n, kind, 1e-3, 4);
  const auto sel = perturbed_selectors(p);
  Rng rng = make_rng(21);
  const MatR C0 = random_normal<double>(r, r, rng), C1 = random_normal<double>(r, r, rng);
  const auto yz = min_norm_sylvester_solve(kind, sel, C0, C1);
  EXPECT_LE(yz.residual, 1e-12 * pair_norm(C0, C1));

  const MatR T = sylvester_operator(kind_mobius(kind), sel);
  MatR rhs(2 * r * r, 1);
  rhs << vec(C0), vec(C1);
  const MatR x = T.completeOrthogonalDecomposition().solve(rhs);
  MatR mine(x.rows(), 1);
  mine << vec(yz.Y), vec(MatR(yz.Z.transpose()));
  EXPECT_LE((mine - x).norm(), 1e-12 * x.norm());
}

TEST(Sylvester, NonPositiveDeltaIsRejected) {
  const auto sel = unperturbed_selectors<double>(2, 1);
  EXPECT_THROW(SylvesterSolver<double>(kind_mobius(StructureKind::odd), sel, 0.0), PreconditionError);
}

MatrixPolynomial<double> structured_rhs(const Mobius<double>& A, Index r, Rng& rng) {
  const PolyR c = random_polynomial<double>(r, r, 1, rng);
  return (c + star_adjoint(mobius(c, A))) * 0.5;
}

TEST(StarSylvester, AverageSolvesStarEquationForAllKinds) {
  Rng rng = make_rng(31);
  for (StructureKind kind : kAllKinds)
    for (int k = 1; k <= 3; ++k) {
      const Mobius<double> A = kind_mobius(kind);
      const auto p = random_structured_perturbation<double>(k, 2, kind, 1e-4, k);
      const auto sel = perturbed_selectors(p);
      const PolyR rhs = structured_rhs(A, k * 2, rng);
      const auto yz = min_norm_sylvester_solve(A, sel, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)));
      const MatR X = star_from_sylvester(A, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)), yz.Y, yz.Z);
      EXPECT_LE(star_sylvester_residual(A, sel, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)), X),
                1e-12 * frob_norm(rhs))
          << kind_name(kind);
    }
}

TEST(StarSylvester, RandomInvolutoryMatrix) {
  Rng rng = make_rng(32);
  const double a = 0.6, b = -1.3, c = (1 - a * a) / b;
  const Mobius<double> A{a, b, c, -a};
  ASSERT_TRUE(A.is_coninvolutory(1e-14));
  for (int k = 1; k <= 3; ++k) {
    const auto sel = unperturbed_selectors<double>(k, 2);
    const PolyR rhs = structured_rhs(A, k * 2, rng);
    const auto yz = min_norm_sylvester_solve(A, sel, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)));
    const MatR X = star_from_sylvester(A, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)), yz.Y, yz.Z);
    EXPECT_LE(star_sylvester_residual(A, sel, MatR(rhs.coeff(0)), MatR(rhs.coeff(1)), X), 1e-12 * frob_norm(rhs));
  }
}

TEST(StarSylvester, UnstructuredRightHandSideIsRejected) {
  Rng rng = make_rng(33);
  const MatR C0 = random_normal<double>(2, 2, rng), C1 = random_normal<double>(2, 2, rng);
  EXPECT_THROW(star_from_sylvester(kind_mobius(StructureKind::symmetric), C0, C1, C0, C0), PreconditionError);
}

struct FixedPointSetup {
  PolyR P;
  BlockKroneckerPencil<double> L;
};

FixedPointSetup setup(StructureKind kind, std::uint64_t seed) {
  FixedPointSetup s;
  s.P = random_structured<double>(2, 5, kind, 1.0, seed);
  s.L = linearize(s.P, kind);
  return s;
}

TEST(FixedPoint, ConvergesWithinIterateBound) {
  for (StructureKind kind : kAllKinds)
    for (double eps : {1e-8, 1e-5, 1e-3}) {
      const auto s = setup(kind, 5);
      const auto p = random_structured_perturbation<double>(2, 2, kind, eps, 77);
      const auto st = quadratic_fixed_point(p, s.L.M0(), s.L.M1(), kind);
      EXPECT_LE(st.residual, 1e-12 * st.theta) << kind_name(kind);
      EXPECT_LT(st.kappa1, 0.25);
      for (double x : st.x_norms) EXPECT_LE(x, st.iterate_bound() * (1 + 1e-14));
      EXPECT_LE(quadratic_residual(p, s.L.M0(), s.L.M1(), st.X), 1e-12 * st.theta);
    }
}

TEST(FixedPoint, ZeroPerturbationGivesZero) {
  const auto s = setup(StructureKind::symmetric, 6);
  const auto p = StructuredPerturbation<double>::zero(2, 2, StructureKind::symmetric);
  const auto st = quadratic_fixed_point(p, s.L.M0(), s.L.M1(), StructureKind::symmetric);
  EXPECT_EQ(st.X.norm(), 0.0);
  EXPECT_EQ(st.iterations, 1);
}

TEST(FixedPoint, InadmissibleTrialRaisesPrecondition) {
  const auto s = setup(StructureKind::even, 7);
  auto p = random_structured_perturbation<double>(2, 2, StructureKind::even, 1.0, 8);
  p.dA11.setZero();
  p.dB11.setZero();
  p.dA21.setZero();
  p.dB21.setZero();
  const double scale = 10.0 / pair_norm(p.dA22, p.dB22);
  p.dA22 *= scale;
  p.dB22 *= scale;
  try {
    quadratic_fixed_point(p, s.L.M0(), s.L.M1(), StructureKind::even);
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_GE(e.value(), 0.25);
    EXPECT_EQ(e.bound(), 0.25);
  }
}

TEST(FixedPoint, CertifiedDeltaModeUsesLowerBound) {
  const auto s = setup(StructureKind::odd, 9);
  const auto p = random_structured_perturbation<double>(2, 2, StructureKind::odd, 1e-6, 10);
  FixedPointOptions opt;
  opt.delta_mode = DeltaMode::certified;
  const auto st = quadratic_fixed_point(p, s.L.M0(), s.L.M1(), StructureKind::odd, opt);
  EXPECT_DOUBLE_EQ(st.delta, delta_lower_bound(2, p.norm()));
  EXPECT_LE(st.residual, 1e-12 * st.theta);
}

TEST(Perturbation, RandomIsStructuredAndScaled) {
  for (StructureKind kind : kAllKinds) {
    const auto p = random_structured_perturbation<double>(2, 2, kind, 1e-7, 12);
    EXPECT_NEAR(p.norm(), 1e-7, 1e-21);
    EXPECT_TRUE(is_structured(p.pencil(), kind, 1e-13));
    const auto q = StructuredPerturbation<double>::from_pencil(p.pencil(), 2, 2, kind);
    EXPECT_TRUE(q.pencil() == p.pencil());
    EXPECT_GT(pair_norm(p.dA22, p.dB22), 0.0);
  }
  EXPECT_THROW(random_structured_perturbation<double>(2, 2, StructureKind::odd, 0.0, 1), InvalidArgument);
}

}  // namespace
