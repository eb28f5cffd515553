#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "bloch/types.hpp"

namespace bloch {

/// Spherical Bessel function j_n(z), n <= 50. Downward (Miller) recurrence
/// below the turning point, upward recurrence above it.
double sph_bessel_j(int n, double z);

/// Spherical Bessel function y_n(z), z > 0, n <= 50. Upward recurrence.
double sph_bessel_y(int n, double z);

/// Coefficients of the two leading surface moments on the sphere r = R:
///   d  = 1 / (4 pi R^2 j0(k+ R)),   d1 = k+ / (4 pi R^2 j1(k+ R)).
/// Radii with j0(k+ R) or j1(k+ R) near zero are rejected as resonant.
struct BallConstants {
  double R = 0.0;
  double kplus = 0.0;
  double d = 0.0;
  double d1 = 0.0;
};

BallConstants ball_constants(double R, double kplus);

struct QuadratureNode {
  Vec3 point;     // on the unit sphere
  double weight;  // weights sum to 4 pi
};

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) with `order`
/// nodes times 2*order uniform azimuthal points. 2 <= order <= 64.
std::vector<QuadratureNode> sphere_quadrature(int order);

/// Closed forms of the plane-wave moments over the sphere of radius R:
///   integral_{|x|=R} e^{i k.x} dS    = 4 pi R^2 j0(|k| R)
///   integral_{|x|=R} x^ e^{i k.x} dS = 4 pi i R^2 j1(|k| R) k^
std::pair<std::complex<double>, Eigen::Vector3cd> plane_wave_moments(const Vec3& k, double R);

}  // namespace bloch
