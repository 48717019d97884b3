#include "strukt/io.hpp"

#include <fstream>

namespace strukt {

namespace {

template <FieldScalar S>
MatrixPolynomial<S> parse_coeffs(const Json& j, Index rows, Index cols, int grade) {
  const Json& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != grade + 1)
    throw InvalidArgument("coeffs must hold grade+1 matrices");
  MatrixPolynomial<S> p(rows, cols, grade);
  for (int k = 0; k <= grade; ++k) {
    const Json& m = coeffs[k];
    if (!m.is_array() || static_cast<Index>(m.size()) != rows)
      throw InvalidArgument("coefficient " + std::to_string(k) + " has the wrong row count");
    for (Index i = 0; i < rows; ++i) {
      const Json& row = m[i];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols)
        throw InvalidArgument("coefficient " + std::to_string(k) + " has the wrong column count");
      for (Index c = 0; c < cols; ++c) {
        const Json& e = row[c];
        if constexpr (is_complex_v<S>) {
          if (e.is_array()) {
            if (e.size() != 2) throw InvalidArgument("complex entries are [re, im] pairs");
            p.coeff(k)(i, c) = S(e[0].get<double>(), e[1].get<double>());
          } else {
            p.coeff(k)(i, c) = S(e.get<double>(), 0.0);
          }
        } else {
          if (!e.is_number()) throw InvalidArgument("real entries must be numbers");
          p.coeff(k)(i, c) = e.get<double>();
        }
      }
    }
  }
  return p;
}

}  // namespace

AnyPolynomial polynomial_from_json(const Json& j) {
  try {
    Index rows = j.at("rows").get<Index>();
    Index cols = j.at("cols").get<Index>();
    int grade = j.at("grade").get<int>();
    if (rows < 0 || cols < 0 || grade < 0) throw InvalidArgument("negative size or grade");
    std::string field = j.value("field", "real");
    if (field == "real") return parse_coeffs<double>(j, rows, cols, grade);
    if (field == "complex") return parse_coeffs<Complex>(j, rows, cols, grade);
    throw InvalidArgument("field must be 'real' or 'complex'");
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed polynomial document: ") + e.what());
  }
}

PolyR real_polynomial_from_json(const Json& j) {
  AnyPolynomial p = polynomial_from_json(j);
  if (auto* r = std::get_if<PolyR>(&p)) return *r;
  throw InvalidArgument("expected a real polynomial");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

AnyPolynomial read_polynomial(const std::filesystem::path& path) {
  return polynomial_from_json(read_json(path));
}

}  // namespace strukt
