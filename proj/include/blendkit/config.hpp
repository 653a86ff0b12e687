#pragma once

#include <cstddef>
#include <cstdint>

namespace blendkit {

/// Size limits for every enumeration-based check. The institutions quantify
/// over infinite classes; these bounds make the checks finite.
struct Bounds {
  /// Largest MSA carrier enumerated per sort.
  int max_carrier = 3;
  /// Largest PL signature whose models may be enumerated.
  std::size_t pl_symbol_cap = 20;
  /// Cap on the number of models / algebras / sentences any one enumeration
  /// may produce.
  std::size_t enumeration_cap = 2'000'000;
  /// Default sentence depth for syntactic slices.
  int depth = 4;
  /// Largest signature (symbol count) used by universal-property searches.
  std::size_t universal_search_size = 3;
};

struct RunConfig {
  Bounds bounds;
  std::uint64_t seed = 7;
  int iterations = 200;
  bool json = false;
};

}  // namespace blendkit
