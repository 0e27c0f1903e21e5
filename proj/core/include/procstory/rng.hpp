#pragma once

#include <cstdint>
#include <random>

namespace procstory {

/// All stochastic components draw from one of these, constructed from the
/// run seed. mt19937_64 keeps the sequence identical across runs on the
/// same build, which the reproducibility contract relies on.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Derive an independent stream for a named component so that adding a
/// consumer does not perturb the draws of existing ones.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  rng.discard(7);
  return rng;
}

}  // namespace procstory
