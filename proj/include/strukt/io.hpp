#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "strukt/polycore.hpp"

namespace strukt {

using Json = nlohmann::json;
using AnyPolynomial = std::variant<PolyR, PolyC>;

// {"rows","cols","grade","field","coeffs":[P0,...]}, row-major, complex entries as [re,im].
template <FieldScalar S>
Json polynomial_to_json(const MatrixPolynomial<S>& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) {
    Json rows = Json::array();
    for (Index i = 0; i < c.rows(); ++i) {
      Json row = Json::array();
      for (Index j = 0; j < c.cols(); ++j) {
        if constexpr (is_complex_v<S>)
          row.push_back(Json::array({c(i, j).real(), c(i, j).imag()}));
        else
          row.push_back(c(i, j));
      }
      rows.push_back(std::move(row));
    }
    coeffs.push_back(std::move(rows));
  }
  return Json{{"rows", p.rows()},
              {"cols", p.cols()},
              {"grade", p.grade()},
              {"field", is_complex_v<S> ? "complex" : "real"},
              {"coeffs", std::move(coeffs)}};
}

AnyPolynomial polynomial_from_json(const Json& j);

// Rejects complex documents.
PolyR real_polynomial_from_json(const Json& j);

AnyPolynomial read_polynomial(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

template <FieldScalar S>
void write_polynomial(const std::filesystem::path& path, const MatrixPolynomial<S>& p) {
  write_json(path, polynomial_to_json(p));
}

}  // namespace strukt
