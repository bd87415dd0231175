#pragma once

namespace aniso {

// Embedded in every emitted result file and in cache keys, so cached
// results are invalidated whenever the numerics may have changed.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace aniso
