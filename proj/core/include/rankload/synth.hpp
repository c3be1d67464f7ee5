#pragma once

#include "rankload/message.hpp"

namespace rankload {

// Deterministic per seed: the generator is a pure function of the config, and
// the draw sequence is pinned (mt19937_64 plus hand-rolled Poisson/Gaussian
// transforms) so outputs are identical across platforms and stdlibs.
Stream generate_stream(const SynthConfig& config);

}  // namespace rankload
