#include "strukt/linearize.hpp"

namespace strukt {

std::string_view placement_name(Placement p) {
  return p == Placement::tridiagonal ? "tridiagonal" : "stacked";
}

Placement parse_placement(std::string_view name) {
  if (name == "tridiagonal") return Placement::tridiagonal;
  if (name == "stacked") return Placement::stacked;
  throw InvalidArgument("unknown placement '" + std::string(name) + "'");
}

MatR permutation_to_tridiagonal(int k, Index n, StructureKind kind) {
  if (k < 1 || n < 1) throw InvalidArgument("permutation needs k >= 1 and n >= 1");
  const bool reversed = kind_family(kind) == KindFamily::reversal;
  const Index blocks = 2 * k + 1;
  MatR Pi = MatR::Zero(blocks * n, blocks * n);
  for (Index pos = 0; pos < blocks; ++pos) {
    Index src;
    if (pos % 2 == 0) {
      src = pos / 2;
    } else {
      Index j = pos / 2;
      src = (k + 1) + (reversed ? k - 1 - j : j);
    }
    Pi.block(pos * n, src * n, n, n).setIdentity();
  }
  return Pi;
}

}  // namespace strukt
