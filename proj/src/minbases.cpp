#include "strukt/minbases.hpp"

namespace strukt {

SelectorMatrices selector_matrices(int k, Index n) {
  if (k < 1 || n < 1) throw InvalidArgument("selector matrices need k >= 1 and n >= 1");
  SelectorMatrices s{MatR::Zero(k * n, (k + 1) * n), MatR::Zero(k * n, (k + 1) * n)};
  s.E.leftCols(k * n).setIdentity();
  s.F.rightCols(k * n).setIdentity();
  return s;
}

}  // namespace strukt
