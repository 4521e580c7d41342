#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "odbench/types.hpp"

namespace odbench {

enum class Archetype {
  kEnclosed,
  kPeripheral,
  kGlobal,
  kLocal,
  kIsolated,
  kClustered,
  kUnivariate,
  kMultivariate,
};

struct ArchetypeSpec {
  Archetype archetype = Archetype::kGlobal;
  std::size_t n = 1000;
  std::size_t d = 2;          // >= 2
  double contamination = 0.05;
  std::uint64_t seed = 1;
};

const char* archetype_name(Archetype a);
Archetype archetype_from_name(const std::string& name);

/// Labeled dataset whose anomalies satisfy the archetype's checkable
/// property (peripheral points leave the normals' bounding box, global
/// ones sit in globally sparse regions, and so on). Bit-identical for a
/// fixed spec.
Dataset generate_archetype(const ArchetypeSpec& spec);

/// Generation parameters for the JSON sidecar written next to the CSV.
std::string archetype_params_json(const ArchetypeSpec& spec);

}  // namespace odbench
