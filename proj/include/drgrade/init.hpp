#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "drgrade/tensor.hpp"

namespace drg {

// Scaled normal init, variance 2/fan_in.
inline TensorRef he_normal(Shape shape, std::size_t fan_in, std::uint64_t seed) {
    auto t = make_tensor(shape);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
    for (auto& v : t->v) v = dist(rng);
    return t;
}

}  // namespace drg
