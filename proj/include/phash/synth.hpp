#pragma once

#include <cstdint>
#include <string>

#include "phash/image.hpp"

namespace phash {

/// Deterministic procedural test image: layered low-frequency gradients,
/// random shapes and mild texture, normalized to a wide gray range. The same
/// index always produces the same pixels.
LumaImage synth_image(std::uint64_t index, int height = 512, int width = 512);

/// Writes `count` synthetic images (seed, seed+1, ...) as PNGs named
/// synth_0000.png ... into `dir`, creating it if needed.
void write_synth_corpus(const std::string& dir, int count, int size = 512,
                        std::uint64_t seed = 0);

}  // namespace phash
