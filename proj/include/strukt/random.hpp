#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace strukt {

using Rng = std::mt19937_64;

// Independent stream per (seed, stream) pair.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_rng(seed, index + 0x9e3779b97f4a7c15ULL);
  return rng();
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> random_normal(
    Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> dist;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        m(i, j) = dist(rng);
      } else {
        double re = dist(rng);
        double im = dist(rng);
        m(i, j) = Scalar(re, im);
      }
    }
  return m;
}

}  // namespace strukt
