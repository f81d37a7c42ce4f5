#pragma once

#include <algorithm>

#include "gpkl/window.hpp"

namespace gpkl {

/// Jaccard distance between two index windows under the counting measure:
/// 1 - |A intersect B| / |A union B|. 0 for identical windows, 1 for
/// disjoint ones.
inline double jaccard_distance(const Window& a, const Window& b) {
    const Eigen::Index lo = std::max(a.start, b.start);
    const Eigen::Index hi = std::min(a.end(), b.end());
    const Eigen::Index inter = std::max<Eigen::Index>(0, hi - lo);
    const Eigen::Index uni = a.size + b.size - inter;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace gpkl
