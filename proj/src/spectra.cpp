#include "strukt/spectra.hpp"

#include <algorithm>
#include <limits>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace strukt {

Eigenvalue Eigenvalue::finite(Complex z) {
  double s = std::hypot(std::abs(z), 1.0);
  return {z / s, Complex(1.0 / s)};
}

Eigenvalue Eigenvalue::at_infinity() { return {Complex(1.0), Complex(0.0)}; }

double chordal_distance(const Eigenvalue& x, const Eigenvalue& y) {
  double nx = std::hypot(std::abs(x.alpha), std::abs(x.beta));
  double ny = std::hypot(std::abs(y.alpha), std::abs(y.beta));
  if (nx == 0 || ny == 0) return 1.0;
  return std::abs(x.alpha * y.beta - y.alpha * x.beta) / (nx * ny);
}

namespace {

Eigenvalue normalized(Complex a, Complex b) {
  double s = std::hypot(std::abs(a), std::abs(b));
  if (s == 0) return {a, b};
  return {a / s, b / s};
}

bool chordal_less(const Eigenvalue& x, const Eigenvalue& y) {
  bool ix = x.infinite(), iy = y.infinite();
  if (ix != iy) return iy;
  if (ix) return false;
  Complex vx = x.value(), vy = y.value();
  if (vx.real() != vy.real()) return vx.real() < vy.real();
  return vx.imag() < vy.imag();
}

}  // namespace

SpectrumReport spectrum_from_list(const std::vector<Eigenvalue>& eigs) {
  SpectrumReport rep;
  rep.eigs = eigs;
  std::stable_sort(rep.eigs.begin(), rep.eigs.end(), chordal_less);
  return rep;
}

SpectrumReport pencil_eigs(const MatR& L0, const MatR& L1) {
  const Index n = L0.rows();
  if (L0.cols() != n || L1.rows() != n || L1.cols() != n) throw InvalidArgument("square pencil required");
  std::vector<Eigenvalue> eigs;
  if (n == 0) return spectrum_from_list(eigs);
  MatR a = -L0, b = L1;
  std::vector<double> ar(n), ai(n), be(n);
  lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), b.data(), static_cast<lapack_int>(n),
                                  ar.data(), ai.data(), be.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("dggev failed with info " + std::to_string(info));
  for (Index i = 0; i < n; ++i) eigs.push_back(normalized(Complex(ar[i], ai[i]), Complex(be[i])));
  return spectrum_from_list(eigs);
}

SpectrumReport pencil_eigs(const MatC& L0, const MatC& L1) {
  const Index n = L0.rows();
  if (L0.cols() != n || L1.rows() != n || L1.cols() != n) throw InvalidArgument("square pencil required");
  std::vector<Eigenvalue> eigs;
  if (n == 0) return spectrum_from_list(eigs);
  MatC a = -L0, b = L1;
  std::vector<Complex> al(n), be(n);
  lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), b.data(), static_cast<lapack_int>(n),
                                  al.data(), be.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("zggev failed with info " + std::to_string(info));
  for (Index i = 0; i < n; ++i) eigs.push_back(normalized(al[i], be[i]));
  return spectrum_from_list(eigs);
}

std::vector<int> min_cost_assignment(const MatR& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw InvalidArgument("assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials u, v over 1-based rows/columns; p[j] is the row assigned to column j.
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

MatchReport compare_spectra(const SpectrumReport& a, const SpectrumReport& b, double tol) {
  if (a.eigs.size() != b.eigs.size())
    throw InvalidArgument("spectra differ in cardinality (" + std::to_string(a.eigs.size()) + " vs " +
                          std::to_string(b.eigs.size()) + ")");
  const Index n = static_cast<Index>(a.eigs.size());
  MatR cost(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost(i, j) = chordal_distance(a.eigs[i], b.eigs[j]);
  MatchReport rep;
  rep.assignment = min_cost_assignment(cost);
  for (Index i = 0; i < n; ++i) {
    double d = cost(i, rep.assignment[i]);
    rep.max_distance = std::max(rep.max_distance, d);
    if (d > tol) ++rep.unmatched;
  }
  return rep;
}

double symmetry_check(const SpectrumReport& spectrum, StructureKind kind, bool conjugate_transpose) {
  std::vector<Eigenvalue> image;
  image.reserve(spectrum.eigs.size());
  for (const Eigenvalue& e : spectrum.eigs) {
    Complex a = e.alpha, b = e.beta;
    if (conjugate_transpose) {
      a = std::conj(a);
      b = std::conj(b);
    }
    switch (kind_family(kind)) {
      case KindFamily::reversal: image.push_back({b, a}); break;
      case KindFamily::alternating: image.push_back({-a, b}); break;
      case KindFamily::transpose:
        image.push_back(conjugate_transpose ? Eigenvalue{a, b} : Eigenvalue{std::conj(a), std::conj(b)});
        break;
    }
  }
  return compare_spectra(spectrum, spectrum_from_list(image)).max_distance;
}

}  // namespace strukt
