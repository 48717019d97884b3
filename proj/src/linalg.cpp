#include "strukt/linalg.hpp"

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace strukt {

namespace {

lapack_int gesdd(char jobz, lapack_int m, lapack_int n, double* a, double* s, double* u, lapack_int ldu,
                 double* vt, lapack_int ldvt) {
  return LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, m, s, u, ldu, vt, ldvt);
}

lapack_int gesdd(char jobz, lapack_int m, lapack_int n, Complex* a, double* s, Complex* u, lapack_int ldu,
                 Complex* vt, lapack_int ldvt) {
  return LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, m, s, u, ldu, vt, ldvt);
}

template <FieldScalar S>
Svd<S> svd_impl(const Mat<S>& a, bool vectors) {
  const auto m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  const lapack_int p = std::min(m, n);
  Svd<S> out;
  out.s.resize(p);
  if (p == 0) {
    if (vectors) {
      out.U = Mat<S>::Zero(m, 0);
      out.V = Mat<S>::Zero(n, 0);
    }
    return out;
  }
  Mat<S> work = a;
  Mat<S> u, vt;
  if (vectors) {
    u.resize(m, p);
    vt.resize(p, n);
  }
  const lapack_int info = gesdd(vectors ? 'S' : 'N', m, n, work.data(), out.s.data(), vectors ? u.data() : nullptr,
                                std::max<lapack_int>(m, 1), vectors ? vt.data() : nullptr, std::max<lapack_int>(p, 1));
  if (info != 0) throw NumericalError("gesdd failed with info " + std::to_string(info));
  if (vectors) {
    out.U = std::move(u);
    out.V = vt.adjoint();
  }
  return out;
}

}  // namespace

Svd<double> lapack_svd(const MatR& a, bool vectors) { return svd_impl<double>(a, vectors); }
Svd<Complex> lapack_svd(const MatC& a, bool vectors) { return svd_impl<Complex>(a, vectors); }

}  // namespace strukt
