#include "strukt/polycore.hpp"

namespace strukt {

Mobius<double> kind_mobius(StructureKind kind) {
  switch (kind) {
    case StructureKind::symmetric: return {1, 0, 0, 1};
    case StructureKind::skew_symmetric: return {-1, 0, 0, -1};
    case StructureKind::palindromic: return {0, 1, 1, 0};
    case StructureKind::anti_palindromic: return {0, -1, -1, 0};
    case StructureKind::even: return {-1, 0, 0, 1};
    case StructureKind::odd: return {1, 0, 0, -1};
  }
  throw InvalidArgument("unknown structure kind");
}

std::string_view kind_name(StructureKind kind) {
  switch (kind) {
    case StructureKind::symmetric: return "symmetric";
    case StructureKind::skew_symmetric: return "skew_symmetric";
    case StructureKind::palindromic: return "palindromic";
    case StructureKind::anti_palindromic: return "anti_palindromic";
    case StructureKind::even: return "even";
    case StructureKind::odd: return "odd";
  }
  throw InvalidArgument("unknown structure kind");
}

StructureKind parse_kind(std::string_view name) {
  for (StructureKind k : kAllKinds)
    if (kind_name(k) == name) return k;
  if (name == "skew") return StructureKind::skew_symmetric;
  if (name == "anti") return StructureKind::anti_palindromic;
  throw InvalidArgument("unknown structure kind '" + std::string(name) + "'");
}

int kind_parity(StructureKind kind) {
  switch (kind) {
    case StructureKind::symmetric:
    case StructureKind::palindromic:
    case StructureKind::even: return 1;
    default: return -1;
  }
}

KindFamily kind_family(StructureKind kind) {
  switch (kind) {
    case StructureKind::symmetric:
    case StructureKind::skew_symmetric: return KindFamily::transpose;
    case StructureKind::palindromic:
    case StructureKind::anti_palindromic: return KindFamily::reversal;
    default: return KindFamily::alternating;
  }
}

}  // namespace strukt
