#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "strukt/errors.hpp"
#include "strukt/random.hpp"

namespace strukt {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using MatR = Mat<double>;
using MatC = Mat<Complex>;

template <typename T>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <typename Scalar>
concept FieldScalar =
    std::is_same_v<Scalar, double> || std::is_same_v<Scalar, Complex>;

enum class Field { real, complex };

// Coefficients P_0..P_g in ascending powers. The grade is stored, never
// inferred from trailing zeros.
template <FieldScalar Scalar>
class MatrixPolynomial {
 public:
  using scalar_type = Scalar;
  using matrix_type = Mat<Scalar>;
  static constexpr Field field = is_complex_v<Scalar> ? Field::complex : Field::real;

  MatrixPolynomial() : MatrixPolynomial(0, 0, 0) {}

  MatrixPolynomial(Index rows, Index cols, int grade) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw InvalidArgument("negative dimension");
    if (grade < 0) throw InvalidArgument("negative grade");
    coeffs_.assign(grade + 1, matrix_type::Zero(rows, cols));
  }

  explicit MatrixPolynomial(std::vector<matrix_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidArgument("a polynomial needs at least one coefficient");
    rows_ = coeffs_.front().rows();
    cols_ = coeffs_.front().cols();
    for (const auto& c : coeffs_)
      if (c.rows() != rows_ || c.cols() != cols_)
        throw InvalidArgument("coefficient sizes differ");
  }

  // Constant polynomial of the given grade.
  static MatrixPolynomial constant(const matrix_type& c, int grade = 0) {
    MatrixPolynomial p(c.rows(), c.cols(), grade);
    p.coeffs_[0] = c;
    return p;
  }

  // lambda*B + A
  static MatrixPolynomial pencil(const matrix_type& A, const matrix_type& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
      throw InvalidArgument("pencil coefficients differ in size");
    return MatrixPolynomial(std::vector<matrix_type>{A, B});
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int grade() const { return static_cast<int>(coeffs_.size()) - 1; }

  // -1 for the zero polynomial.
  int degree() const {
    for (int i = grade(); i >= 0; --i)
      if (!(coeffs_[i].array() == Scalar(0)).all()) return i;
    return -1;
  }

  const matrix_type& coeff(int i) const { return coeffs_.at(i); }
  matrix_type& coeff(int i) { return coeffs_.at(i); }
  const std::vector<matrix_type>& coeffs() const { return coeffs_; }

  MatrixPolynomial with_grade(int g) const {
    if (g < degree()) throw InvalidArgument("grade below degree");
    MatrixPolynomial out(rows_, cols_, g);
    for (int i = 0; i <= std::min(g, grade()); ++i) out.coeffs_[i] = coeffs_[i];
    return out;
  }

  MatrixPolynomial block(Index r0, Index c0, Index nr, Index nc) const {
    MatrixPolynomial out(nr, nc, grade());
    for (int i = 0; i <= grade(); ++i) out.coeffs_[i] = coeffs_[i].block(r0, c0, nr, nc);
    return out;
  }

  void set_block(Index r0, Index c0, const MatrixPolynomial& b) {
    if (b.grade() > grade()) throw InvalidArgument("block grade exceeds target grade");
    for (int i = 0; i <= b.grade(); ++i)
      coeffs_[i].block(r0, c0, b.rows(), b.cols()) = b.coeffs_[i];
  }

  template <typename F>
  MatrixPolynomial map(F&& f) const {
    std::vector<matrix_type> c;
    c.reserve(coeffs_.size());
    for (const auto& m : coeffs_) c.push_back(f(m));
    return MatrixPolynomial(std::move(c));
  }

  MatrixPolynomial operator-() const {
    return map([](const matrix_type& m) { return matrix_type(-m); });
  }
  MatrixPolynomial operator*(Scalar s) const {
    return map([s](const matrix_type& m) { return matrix_type(s * m); });
  }
  MatrixPolynomial& operator+=(const MatrixPolynomial& o) {
    combine(o, Scalar(1));
    return *this;
  }
  MatrixPolynomial& operator-=(const MatrixPolynomial& o) {
    combine(o, Scalar(-1));
    return *this;
  }
  friend MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b) { return a += b; }
  friend MatrixPolynomial operator-(MatrixPolynomial a, const MatrixPolynomial& b) { return a -= b; }
  friend MatrixPolynomial operator*(Scalar s, const MatrixPolynomial& p) { return p * s; }

  bool operator==(const MatrixPolynomial& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || grade() != o.grade()) return false;
    for (int i = 0; i <= grade(); ++i)
      if (!(coeffs_[i].array() == o.coeffs_[i].array()).all()) return false;
    return true;
  }

 private:
  // Sum at the larger of the two grades.
  void combine(const MatrixPolynomial& o, Scalar s) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("size mismatch in sum");
    if (o.grade() > grade()) coeffs_.resize(o.grade() + 1, matrix_type::Zero(rows_, cols_));
    for (int i = 0; i <= o.grade(); ++i) coeffs_[i] += s * o.coeffs_[i];
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<matrix_type> coeffs_;
};

using PolyR = MatrixPolynomial<double>;
using PolyC = MatrixPolynomial<Complex>;

template <typename T>
T conj_scalar(const T& x) {
  if constexpr (is_complex_v<T>)
    return std::conj(x);
  else
    return x;
}

// A = [a b; c d]
template <FieldScalar T = double>
struct Mobius {
  T a{1}, b{0}, c{0}, d{1};

  T det() const { return a * d - b * c; }

  // Mobius<T>{...} * other composes as 2x2 matrices.
  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  Mobius conj() const { return {conj_scalar(a), conj_scalar(b), conj_scalar(c), conj_scalar(d)}; }

  bool is_coninvolutory(double tol = 0.0) const {
    Mobius p = *this * conj();
    return std::abs(p.a - T(1)) <= tol && std::abs(p.b) <= tol && std::abs(p.c) <= tol &&
           std::abs(p.d - T(1)) <= tol;
  }
};

inline const Mobius<double> kReversal{0, 1, 1, 0};

enum class StructureKind { symmetric, skew_symmetric, palindromic, anti_palindromic, even, odd };

inline constexpr std::array<StructureKind, 6> kAllKinds = {
    StructureKind::symmetric,   StructureKind::skew_symmetric, StructureKind::palindromic,
    StructureKind::anti_palindromic, StructureKind::even,     StructureKind::odd};

Mobius<double> kind_mobius(StructureKind kind);
std::string_view kind_name(StructureKind kind);
StructureKind parse_kind(std::string_view name);

// +1 for symmetric, palindromic, even; -1 for their skew partners.
int kind_parity(StructureKind kind);

enum class KindFamily { transpose, reversal, alternating };
KindFamily kind_family(StructureKind kind);

// ---------------------------------------------------------------------------

template <FieldScalar S>
double frob_norm(const MatrixPolynomial<S>& p) {
  double s = 0;
  for (const auto& c : p.coeffs()) s += c.squaredNorm();
  return std::sqrt(s);
}

template <typename A, typename B>
double pair_norm(const A& c, const B& d) {
  return std::sqrt(c.squaredNorm() + d.squaredNorm());
}

// Horner. A real polynomial evaluated at a complex point yields a complex matrix.
template <FieldScalar S, FieldScalar T>
auto evaluate(const MatrixPolynomial<S>& p, T x) {
  using R = std::conditional_t<is_complex_v<S> || is_complex_v<T>, Complex, double>;
  Mat<R> acc = p.coeff(p.grade()).template cast<R>();
  for (int i = p.grade() - 1; i >= 0; --i) acc = R(x) * acc + p.coeff(i).template cast<R>();
  return acc;
}

template <FieldScalar S>
MatrixPolynomial<S> reversal(const MatrixPolynomial<S>& p, int g) {
  if (g < p.degree()) throw InvalidArgument("reversal grade below degree");
  MatrixPolynomial<S> q = p.with_grade(g);
  MatrixPolynomial<S> out(p.rows(), p.cols(), g);
  for (int i = 0; i <= g; ++i) out.coeff(i) = q.coeff(g - i);
  return out;
}

template <FieldScalar S>
MatrixPolynomial<S> star_adjoint(const MatrixPolynomial<S>& p) {
  return p.map([](const Mat<S>& m) { return Mat<S>(m.adjoint()); });
}

// Plain transpose, no conjugation.
template <FieldScalar S>
MatrixPolynomial<S> transpose(const MatrixPolynomial<S>& p) {
  return p.map([](const Mat<S>& m) { return Mat<S>(m.transpose()); });
}

template <FieldScalar S>
MatrixPolynomial<S> conjugate(const MatrixPolynomial<S>& p) {
  return p.map([](const Mat<S>& m) { return Mat<S>(m.conjugate()); });
}

// W(j, i) = coefficient of lambda^j in (a lambda + b)^i (c lambda + d)^(g-i).
template <FieldScalar T>
Mat<T> mobius_weights(const Mobius<T>& A, int g) {
  auto times = [](const std::vector<T>& p, T lead, T cst) {
    std::vector<T> out(p.size() + 1, T(0));
    for (std::size_t j = 0; j < p.size(); ++j) {
      out[j] += cst * p[j];
      out[j + 1] += lead * p[j];
    }
    return out;
  };
  Mat<T> W = Mat<T>::Zero(g + 1, g + 1);
  for (int i = 0; i <= g; ++i) {
    std::vector<T> poly{T(1)};
    for (int r = 0; r < i; ++r) poly = times(poly, A.a, A.b);
    for (int r = 0; r < g - i; ++r) poly = times(poly, A.c, A.d);
    for (int j = 0; j <= g; ++j) W(j, i) = poly[j];
  }
  return W;
}

template <FieldScalar S, FieldScalar T>
  requires(std::is_same_v<S, T> || std::is_same_v<T, double>)
MatrixPolynomial<S> mobius(const MatrixPolynomial<S>& p, const Mobius<T>& A) {
  if (A.det() == T(0)) throw InvalidArgument("singular Mobius matrix");
  const int g = p.grade();
  Mat<T> W = mobius_weights(A, g);
  MatrixPolynomial<S> out(p.rows(), p.cols(), g);
  for (int j = 0; j <= g; ++j)
    for (int i = 0; i <= g; ++i)
      if (W(j, i) != T(0)) out.coeff(j) += S(W(j, i)) * p.coeff(i);
  return out;
}

// Coefficient convolution; grade is the sum of grades.
template <FieldScalar S>
MatrixPolynomial<S> multiply(const MatrixPolynomial<S>& p, const MatrixPolynomial<S>& q) {
  if (p.cols() != q.rows()) throw InvalidArgument("inner dimensions differ in product");
  MatrixPolynomial<S> out(p.rows(), q.cols(), p.grade() + q.grade());
  for (int i = 0; i <= p.grade(); ++i) {
    if (p.coeff(i).size() > 0 && (p.coeff(i).array() == S(0)).all()) continue;
    for (int j = 0; j <= q.grade(); ++j) out.coeff(i + j).noalias() += p.coeff(i) * q.coeff(j);
  }
  return out;
}

// p (x) I_n, coefficient-wise.
template <FieldScalar S>
MatrixPolynomial<S> kron_identity(const MatrixPolynomial<S>& p, Index n) {
  return p.map([n](const Mat<S>& m) {
    Mat<S> out = Mat<S>::Zero(m.rows() * n, m.cols() * n);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        out.block(i * n, j * n, n, n).diagonal().setConstant(m(i, j));
    return out;
  });
}

// ||M_A[P] - P^*||_F
template <FieldScalar S, FieldScalar T>
double structure_residual(const MatrixPolynomial<S>& p, const Mobius<T>& A) {
  if (p.rows() != p.cols()) throw InvalidArgument("structure test needs a square polynomial");
  return frob_norm(mobius(p, A) - star_adjoint(p));
}

template <FieldScalar S>
double structure_residual(const MatrixPolynomial<S>& p, StructureKind kind) {
  return structure_residual(p, kind_mobius(kind));
}

template <FieldScalar S>
bool is_structured(const MatrixPolynomial<S>& p, StructureKind kind, double tol = 1e-12) {
  return structure_residual(p, kind) <= tol * std::max(1.0, frob_norm(p));
}

template <FieldScalar S>
MatrixPolynomial<S> structure_project(const MatrixPolynomial<S>& p, StructureKind kind) {
  if (p.rows() != p.cols()) throw InvalidArgument("projection needs a square polynomial");
  return (p + star_adjoint(mobius(p, kind_mobius(kind)))) * S(0.5);
}

template <FieldScalar S = double>
MatrixPolynomial<S> random_polynomial(Index rows, Index cols, int g, Rng& rng) {
  std::vector<Mat<S>> c;
  for (int i = 0; i <= g; ++i) c.push_back(random_normal<S>(rows, cols, rng));
  return MatrixPolynomial<S>(std::move(c));
}

template <FieldScalar S = double>
MatrixPolynomial<S> random_structured(Index n, int g, StructureKind kind, double target_norm,
                                      std::uint64_t seed) {
  if (!(target_norm > 0)) throw InvalidArgument("target norm must be positive");
  if (n == 1 && kind == StructureKind::skew_symmetric)
    throw InvalidArgument("a 1x1 skew-symmetric polynomial is identically zero");
  Rng rng = make_rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    MatrixPolynomial<S> p = structure_project(random_polynomial<S>(n, n, g, rng), kind);
    double nrm = frob_norm(p);
    if (nrm > 0) return p * S(target_norm / nrm);
  }
  throw NumericalError("structured projection stayed zero after resampling");
}

}  // namespace strukt
