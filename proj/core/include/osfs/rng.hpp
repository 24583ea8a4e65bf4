#pragma once

#include <cstdint>

namespace osfs {

/// splitmix64 step; advances state and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stable per-component seed derivation, so independent parts of a run
/// (trees, splits, generators) get decorrelated streams from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace osfs
