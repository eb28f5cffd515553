#pragma once

#include <Eigen/Core>
#include <array>
#include <numbers>

namespace bloch {

using Vec3 = Eigen::Vector3d;
using IntTriple = std::array<int, 3>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace bloch
