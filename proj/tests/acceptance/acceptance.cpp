#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "strukt/backward.hpp"
#include "strukt/linearize.hpp"
#include "strukt/minbases.hpp"
#include "strukt/spectra.hpp"
#include "strukt/sylvester.hpp"
#include "support.hpp"

using namespace strukt;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates failures and the worst observed value of a tracked quantity.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  void worst(double v) {
    if (std::isnan(v) || v > worst_) worst_ = v;
  }
  Outcome outcome(const std::string& label) const {
    std::ostringstream os;
    os.precision(3);
    os << checks_ - failures_ << "/" << checks_ << " checks";
    if (!label.empty()) os << ", worst " << label << " " << worst_;
    if (failures_) os << ", first failure: " << first_;
    return {failures_ == 0 && checks_ > 0, os.str()};
  }

 private:
  long checks_ = 0, failures_ = 0;
  double worst_ = 0;
  std::string first_;
};

std::string tag(StructureKind kind, const std::string& extra = "") {
  return std::string(kind_name(kind)) + (extra.empty() ? "" : " " + extra);
}

double spectral(const MatR& m) { return m.size() ? singular_values<double>(m)(0) : 0.0; }

double sum_sq_spectral(const PolyR& p) {
  double s = 0;
  for (int i = 0; i <= p.grade(); ++i) s += std::pow(spectral(p.coeff(i)), 2);
  return std::sqrt(s);
}

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  return s;
}

Outcome sigma_min_law() {
  Tally t;
  for (StructureKind kind : kAllKinds)
    for (int k = 1; k <= 8; ++k) {
      const double expected = 2 * std::sin(std::numbers::pi / (4.0 * k));
      const auto reduced = sorted(singular_values<double>(build_TA_reduced(k, kind)));
      for (Index n : {1, 2}) {
        const auto full = sorted(singular_values<double>(build_TA(k, n, kind)));
        const double rel = std::abs(full.front() - expected) / expected;
        t.worst(rel);
        t.check(rel <= 1e-10, tag(kind, "k=" + std::to_string(k) + " n=" + std::to_string(n) + " sigma_min"));
        bool sizes = full.size() == reduced.size() * static_cast<std::size_t>(n * n);
        t.check(sizes, tag(kind, "multiplicity"));
        if (!sizes) continue;
        double gap = 0;
        for (std::size_t i = 0; i < full.size(); ++i)
          gap = std::max(gap, std::abs(full[i] - reduced[i / static_cast<std::size_t>(n * n)]));
        t.check(gap <= 1e-12, tag(kind, "k=" + std::to_string(k) + " full vs reduced"));
      }
    }
  return t.outcome("relative error");
}

Outcome round_trip() {
  Tally t;
  std::uint64_t idx = 0;
  for (StructureKind kind : kAllKinds)
    for (int g : {3, 5, 7})
      for (Index n : {2, 3})
        for (Placement how : {Placement::tridiagonal, Placement::stacked})
          for (int trial = 0; trial < 50; ++trial) {
            const PolyR P = random_structured<double>(n, g, kind, 1.0, derive_seed(kSeed + 2, idx++));
            const int k = (g - 1) / 2;
            const PolyR M = symmetrize_M(placement(P, kind, how), kind);
            const PolyR back = recover(assemble(M, k, n, kind));
            double worst = 0;
            for (int i = 0; i <= g; ++i)
              worst = std::max(worst, (back.coeff(i) - P.coeff(i)).norm() / P.coeff(i).norm());
            t.worst(worst);
            t.check(back.grade() == g && worst <= 1e-13, tag(kind, placement_name(how).data()));
          }
  return t.outcome("coefficient residual");
}

Outcome displays() {
  Tally t;
  const Index n = 2;
  for (StructureKind kind : {StructureKind::symmetric, StructureKind::palindromic, StructureKind::even}) {
    const PolyR p = test::integer_structured(n, 7, kind, 1 + static_cast<int>(kind));
    const auto d = test::grade7_display(p, kind);
    const PolyR M = placement(p, kind, Placement::stacked);
    t.check(M == d.placed, tag(kind, "grade-7 placement"));
    t.check(symmetrize_M(M, kind) == d.averaged, tag(kind, "grade-7 symmetrized"));
    t.check(linearize(p, kind, Placement::stacked).pencil() == d.full, tag(kind, "grade-7 pencil"));
  }
  for (StructureKind kind : kAllKinds) {
    const PolyR p = test::integer_structured(n, 5, kind, 10 + static_cast<int>(kind));
    const auto d = test::grade5_display(p, kind);
    const PolyR L = linearize(p, kind, Placement::tridiagonal).pencil();
    t.check(L == d.kron, tag(kind, "grade-5 block form"));
    t.check(test::permuted(L, permutation_to_tridiagonal(2, n, kind)) == d.tri, tag(kind, "grade-5 permuted"));
  }
  return t.outcome("");
}

Outcome eigenvalue_transport() {
  Tally t;
  std::uint64_t idx = 0;
  double worst_sym = 0;
  for (StructureKind kind : kAllKinds) {
    const Index n = kind == StructureKind::skew_symmetric ? 4 : 3;
    int accepted = 0;
    while (accepted < 20) {
      const PolyR P = random_structured<double>(n, 5, kind, 1.0, derive_seed(kSeed + 4, idx++));
      if (!is_regular(P)) continue;
      ++accepted;
      const auto L = linearize(P, kind);
      const auto pencil_spectrum = pencil_eigs(L.L0, L.L1);
      const double chordal = compare_spectra(pencil_spectrum, reference_polyeigs(P)).max_distance;
      const double sym = symmetry_check(pencil_spectrum, kind);
      t.worst(chordal);
      worst_sym = std::max(worst_sym, sym);
      t.check(chordal <= 1e-6, tag(kind, "chordal"));
      t.check(sym <= 1e-8, tag(kind, "symmetry"));
    }
  }
  // Odd-size real skew-symmetric polynomials are singular, hence the size 4 above.
  const PolyR skew3 = random_structured<double>(3, 5, StructureKind::skew_symmetric, 1.0, kSeed + 5);
  t.check(!is_regular(skew3), "3x3 skew-symmetric reported regular");
  Outcome o = t.outcome("chordal distance");
  std::ostringstream os;
  os.precision(3);
  os << ", worst symmetry " << worst_sym;
  o.detail += os.str();
  return o;
}

Outcome backward_certification() {
  Tally t;
  const std::vector<double> norms = {1e-10, 1e-8, 1e-6};
  CertificationOptions opt;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  for (StructureKind kind : kAllKinds) {
    const PolyR P = random_structured<double>(2, 5, kind, 1.0, derive_seed(kSeed + 6, static_cast<int>(kind)));
    const auto reps = run_certification(P, kind, Placement::tridiagonal, norms, 100,
                                        derive_seed(kSeed + 7, static_cast<int>(kind)), opt);
    t.check(reps.size() == 300, tag(kind, "trial count"));
    for (const auto& r : reps) {
      const int k = r.k;
      const double c_pl = 68 * std::pow(k + 1.0, 2.5) * (r.norm_L / r.norm_P) * (1 + r.norm_M + r.norm_M * r.norm_M);
      const double threshold = std::pow(std::numbers::pi / 16, 2) / std::pow(k + 1.0, 2.5) / (1 + r.norm_M);
      const double xb = 3 * k * r.norm_dL / (1 - 3 * k * r.norm_dL);
      const double drb = 6 * std::numbers::sqrt2 * (k + 1) / std::numbers::pi * r.diag.norm_dL21_tilde;
      const std::string w = tag(kind, "dL=" + std::to_string(r.norm_dL));
      t.check(r.ok(), w + " error: " + r.diag.error);
      if (!r.ok()) continue;
      t.check(r.norm_dL < threshold, w + " above threshold");
      t.check(r.diag.fixed_point_residual <= 1e-12 * r.diag.theta, w + " fixed-point residual");
      t.check(r.norm_X <= xb, w + " ||X||");
      t.check(r.norm_dR <= drb && r.norm_dR < 1 / std::numbers::sqrt2, w + " ||dR||");
      t.check(r.diag.dP_structure_residual <= 1e-11, w + " structure of dP");
      t.check(std::abs(r.C_PL - c_pl) <= 1e-12 * c_pl, w + " C_PL");
      t.check(r.ratio <= c_pl * r.norm_dL / r.norm_L, w + " ratio bound");
      t.check(trial_passes(r), w + " trial_passes");
      t.worst(r.ratio / (c_pl * r.norm_dL / r.norm_L));
    }
  }
  return t.outcome("ratio/bound");
}

Outcome norm_inequalities() {
  Tally t;
  Rng rng = make_rng(kSeed + 8);
  std::uniform_int_distribution<int> dim(1, 4), grade(0, 6), kdist(0, 4);
  const double slack = 1e-14;
  auto le = [&](double lhs, double rhs, const std::string& what) {
    t.worst(lhs / std::max(rhs, 1e-300));
    t.check(lhs <= rhs * (1 + slack) + slack, what);
  };
  for (int i = 0; i < 200; ++i) {
    const int g = grade(rng), s = grade(rng), k = kdist(rng);
    const Index m = dim(rng), q = dim(rng), r = dim(rng), p = dim(rng);
    const PolyR P = random_polynomial<double>(m, q, g, rng);
    const PolyR Q = random_polynomial<double>(q, r, s, rng);
    const double nPQ = frob_norm(multiply(P, Q)), nP = frob_norm(P), nQ = frob_norm(Q);
    le(nPQ, std::sqrt(g + 1.0) * sum_sq_spectral(P) * nQ, "(a)");
    le(nPQ, std::sqrt(s + 1.0) * nP * sum_sq_spectral(Q), "(b)");
    le(nPQ, std::min(std::sqrt(g + 1.0), std::sqrt(s + 1.0)) * nP * nQ, "(c)");
    const PolyR Pd = random_polynomial<double>(m, (k + 1) * p, g, rng);
    le(frob_norm(multiply(Pd, transpose(build_Lambda<double>(k, p)))),
       std::min(std::sqrt(g + 1.0), std::sqrt(k + 1.0)) * frob_norm(Pd), "(d)");
    const PolyR Qe = random_polynomial<double>((k + 1) * q, r, s, rng);
    le(frob_norm(multiply(build_Lambda<double>(k, q), Qe)),
       std::min(std::sqrt(s + 1.0), std::sqrt(k + 1.0)) * frob_norm(Qe), "(e)");
  }

  std::uint64_t idx = 0;
  for (int i = 0; i < 200; ++i) {
    const StructureKind kind = kAllKinds[i % 6];
    const int k = 1 + i % 3;
    const Index n = kind == StructureKind::skew_symmetric ? 2 : 1 + (i / 6) % 3;
    // Alternate between linearizations of structured P and arbitrary structured M.
    PolyR M;
    if (i % 2 == 0) {
      const PolyR P0 = random_structured<double>(n, 2 * k + 1, kind, 0.1 + i % 7, derive_seed(kSeed + 9, idx++));
      M = linearize(P0, kind).M();
    } else {
      M = random_structured<double>((k + 1) * n, 1, kind, 0.1 + i % 5, derive_seed(kSeed + 9, idx++));
    }
    const auto L = assemble(M, k, n, kind);
    const PolyR P = recover(L);
    const double nP = frob_norm(P), nL = frob_norm(L.pencil()), nM = frob_norm(M);
    if (nP == 0) continue;
    const double identity = std::sqrt(std::pow(nM / nP, 2) + 4.0 * n * k / (nP * nP));
    t.check(std::abs(nL / nP - identity) <= 1e-14 * identity * 10, tag(kind, "quotient identity"));
    le(1 / std::sqrt(2.0 * (k + 1)), nL / nP, "quotient (a)");
    le(nP / std::sqrt(2.0 * (k + 1)), nM, "quotient (b)");
  }
  return t.outcome("lhs/rhs");
}

PolyR singular_diag(int g) {
  PolyR p(2, 2, g);
  p.coeff(g)(1, 1) = 1;
  p.coeff(1)(1, 1) = -2;
  p.coeff(0)(1, 1) = 0.5;
  return p;
}

Outcome minimal_index_shift() {
  Tally t;
  for (int g : {3, 5}) {
    const PolyR p = singular_diag(g);
    const auto rp = minimal_indices(p);
    t.check(!rp.partial && rp.right_indices == std::vector<int>{0} && rp.left_indices == std::vector<int>{0},
            "P indices g=" + std::to_string(g));
    const auto L = linearize(p, StructureKind::symmetric);
    const auto rl = minimal_indices(L.pencil());
    t.check(!rl.partial && rl.right_indices == std::vector<int>{L.k} && rl.left_indices == std::vector<int>{L.k},
            "pencil indices g=" + std::to_string(g));
  }
  return t.outcome("");
}

Mobius<double> random_mobius(Rng& rng) {
  std::normal_distribution<double> d;
  for (;;) {
    Mobius<double> A{d(rng), d(rng), d(rng), d(rng)};
    if (std::abs(A.det()) > 0.1) return A;
  }
}

Outcome mobius_algebra() {
  Tally t;
  Rng rng = make_rng(kSeed + 10);
  std::uniform_int_distribution<int> dim(1, 4), grade(0, 6);
  auto close = [&](const PolyR& a, const PolyR& b, const std::string& what) {
    const double rel = frob_norm(a - b) / std::max({frob_norm(a), frob_norm(b), 1e-300});
    t.worst(rel);
    t.check(a.grade() == b.grade() && rel <= 1e-12, what);
  };
  for (int i = 0; i < 200; ++i) {
    const Mobius<double> A = random_mobius(rng), B = random_mobius(rng);
    const Index m = dim(rng), q = dim(rng), r = dim(rng);
    const int g = grade(rng), s = grade(rng);
    const PolyR P = random_polynomial<double>(m, q, g, rng);
    const PolyR Q = random_polynomial<double>(q, r, s, rng);
    close(mobius(mobius(P, A), B), mobius(P, A * B), "composition");
    close(mobius(P, kReversal), reversal(P, g), "reversal");
    close(mobius(multiply(P, Q), A), multiply(mobius(P, A), mobius(Q, A)), "product rule");
    std::uniform_int_distribution<Index> r0(0, m - 1), c0(0, q - 1);
    const Index i0 = r0(rng), j0 = c0(rng);
    const Index h = std::uniform_int_distribution<Index>(1, m - i0)(rng);
    const Index w = std::uniform_int_distribution<Index>(1, q - j0)(rng);
    close(mobius(P, A).block(i0, j0, h, w), mobius(P.block(i0, j0, h, w), A), "block action");
  }
  return t.outcome("relative residual");
}

double kappa_by_recursion(double kappa1) {
  double kappa = kappa1;
  for (int i = 0; i < 100000; ++i) {
    const double next = kappa1 * (1 + kappa) * (1 + kappa);
    if (next == kappa) break;
    kappa = next;
  }
  return kappa;
}

Outcome fixed_point_theory() {
  Tally t;
  Rng rng = make_rng(kSeed + 11);
  std::uniform_real_distribution<double> logeps(-9, -3);
  std::uint64_t idx = 0;
  int admissible = 0;
  while (admissible < 50) {
    const StructureKind kind = kAllKinds[idx % 6];
    const int k = 1 + static_cast<int>(idx % 3);
    const Index n = 2;
    const PolyR P = random_structured<double>(n, 2 * k + 1, kind, 1.0, derive_seed(kSeed + 12, idx));
    const auto L = linearize(P, kind);
    const auto pert =
        random_structured_perturbation<double>(k, n, kind, std::pow(10.0, logeps(rng)), derive_seed(kSeed + 13, idx));
    ++idx;
    const double theta = pair_norm(pert.dA22, pert.dB22);
    const double omega = pair_norm(MatR(L.M0() + pert.dA11), MatR(L.M1() + pert.dB11));
    const double delta = sylvester_delta(kind_mobius(kind), perturbed_selectors(pert));
    const double kappa1 = theta * omega / (delta * delta);
    if (!(delta > 0) || kappa1 >= 0.25) continue;
    ++admissible;
    const double bound = theta / delta * (1 + kappa_by_recursion(kappa1));
    try {
      const auto st = quadratic_fixed_point(pert, L.M0(), L.M1(), kind);
      for (std::size_t i = 0; i < st.x_norms.size(); ++i) {
        t.worst(st.yz_norms[i] / bound);
        t.check(st.x_norms[i] <= bound * (1 + 1e-12), tag(kind, "||X_i||"));
        t.check(st.yz_norms[i] <= bound * (1 + 1e-12), tag(kind, "||(Y_i, Z_i)||"));
      }
    } catch (const Error& e) {
      t.check(false, tag(kind, e.what()));
    }
  }

  for (int i = 0; i < 12; ++i) {
    const StructureKind kind = kAllKinds[i % 6];
    const int k = 1 + i % 3;
    const Index n = 2;
    const PolyR P = random_structured<double>(n, 2 * k + 1, kind, 1.0, derive_seed(kSeed + 14, i));
    const auto L = linearize(P, kind);
    auto pert = random_structured_perturbation<double>(k, n, kind, 1.0, derive_seed(kSeed + 15, i));
    pert.dA11.setZero();
    pert.dB11.setZero();
    pert.dA21.setZero();
    pert.dB21.setZero();
    // With only the (2,2) blocks perturbed, delta is sigma_min of the unperturbed operator.
    const double delta = 2 * std::sin(std::numbers::pi / (4.0 * k));
    const double omega = pair_norm(L.M0(), L.M1());
    const double target = 0.25 * (1 + 1e-6) * (1 + i);
    const double scale = target * delta * delta / omega / pair_norm(pert.dA22, pert.dB22);
    pert.dA22 *= scale;
    pert.dB22 *= scale;
    try {
      quadratic_fixed_point(pert, L.M0(), L.M1(), kind);
      t.check(false, tag(kind, "inadmissible trial accepted"));
    } catch (const PreconditionError& e) {
      t.check(e.value() >= 0.25 && e.bound() == 0.25, tag(kind, "precondition payload"));
    } catch (const Error& e) {
      t.check(false, tag(kind, std::string("wrong error: ") + e.what()));
    }
  }
  return t.outcome("iterate/bound");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "sigma_min law and reduced operator", sigma_min_law},
      {2, "placement/assembly/recovery round trip", round_trip},
      {3, "worked example displays", displays},
      {4, "eigenvalue transport", eigenvalue_transport},
      {5, "backward error certification", backward_certification},
      {6, "norm inequalities", norm_inequalities},
      {7, "minimal index shift", minimal_index_shift},
      {8, "Mobius algebra", mobius_algebra},
      {9, "fixed-point iterate bounds", fixed_point_theory},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
