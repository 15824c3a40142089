#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "breptok/errors.hpp"
#include "breptok/model.hpp"

namespace breptok {

struct QuantConfig {
    int levels = 2048;  // L
};

// Uniform scalar quantization of one coordinate in [-1, 1] to a grid index
// in [0, L-1]. Out-of-range inputs are clipped, not rejected. Ties round
// half away from zero so the mapping is identical on every platform.
inline int quantize_coord(double b, const QuantConfig& cfg) {
    if (!std::isfinite(b)) throw NonFiniteInput("coordinate is NaN/inf");
    const double normalized = std::clamp((b + 1.0) / 2.0, 0.0, 1.0);
    const double scaled = static_cast<double>(cfg.levels - 1) * normalized;
    const int k = static_cast<int>(std::round(scaled));
    return std::clamp(k, 0, cfg.levels - 1);
}

inline double dequantize_coord(int k, const QuantConfig& cfg) {
    if (k < 0 || k >= cfg.levels) throw IndexOutOfRange("position token out of [0, L)");
    return 2.0 * static_cast<double>(k) / static_cast<double>(cfg.levels - 1) - 1.0;
}

inline std::array<int, 6> tokenize_bbox(const Bbox& box, const QuantConfig& cfg) {
    std::array<int, 6> out{};
    for (int i = 0; i < 6; ++i) out[static_cast<size_t>(i)] = quantize_coord(box.b[static_cast<size_t>(i)], cfg);
    return out;
}

// Quantizing a near-degenerate box can invert a min/max pair by one step;
// repair by swapping so downstream invariants hold.
inline Bbox detokenize_bbox(const std::array<int, 6>& tokens, const QuantConfig& cfg) {
    Bbox box;
    for (int i = 0; i < 6; ++i) box.b[static_cast<size_t>(i)] = dequantize_coord(tokens[static_cast<size_t>(i)], cfg);
    for (int a = 0; a < 3; ++a) {
        if (box.b[static_cast<size_t>(a)] > box.b[static_cast<size_t>(a) + 3])
            std::swap(box.b[static_cast<size_t>(a)], box.b[static_cast<size_t>(a) + 3]);
    }
    return box;
}

}  // namespace breptok
