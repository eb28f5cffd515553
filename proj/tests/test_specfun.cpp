#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bloch/errors.hpp"
#include "bloch/specfun.hpp"

using namespace bloch;

TEST_CASE("j0 vanishes at pi") { CHECK(std::abs(sph_bessel_j(0, pi)) <= 1e-15); }

TEST_CASE("j1 small-argument behavior") {
  const double z = 1e-6;
  CHECK(std::abs(sph_bessel_j(1, z) / (z / 3.0) - 1.0) <= 1e-12);
  CHECK(sph_bessel_j(0, 0.0) == 1.0);
  CHECK(sph_bessel_j(3, 0.0) == 0.0);
}

TEST_CASE("cross-product identity j_{n+1} y_n - j_n y_{n+1} = 1/z^2") {
  for (int n = 0; n <= 10; ++n) {
    for (const double z : {0.1, 1.0, 4.49, 20.0}) {
      const double cross =
          sph_bessel_j(n + 1, z) * sph_bessel_y(n, z) - sph_bessel_j(n, z) * sph_bessel_y(n + 1, z);
      CHECK(std::abs(cross * z * z - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("agreement with the standard library across orders") {
  for (const int n : {0, 1, 2, 5, 9, 16, 27, 41, 50}) {
    for (double z = 0.05; z <= 60.0; z += 0.73) {
      // mixed tolerance: relative away from the oscillation zeros, absolute
      // near them (|j_n| <= 1 everywhere on this grid)
      const double mine = sph_bessel_j(n, z);
      const double ref = std::sph_bessel(static_cast<unsigned>(n), z);
      CHECK(std::abs(mine - ref) <= 1e-12 + 1e-10 * std::abs(ref));
      if (n <= 30) {  // y grows fast; compare where it is representable
        const double mine_y = sph_bessel_y(n, z);
        const double ref_y = std::sph_neumann(static_cast<unsigned>(n), z);
        CHECK(std::abs(mine_y - ref_y) <= 1e-12 + 1e-10 * std::abs(ref_y));
      }
    }
  }
}

TEST_CASE("domain and order guards") {
  CHECK_THROWS_AS(sph_bessel_y(3, 0.0), Error);
  try {
    sph_bessel_y(3, -1.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain_error);
  }
  CHECK_THROWS_AS(sph_bessel_j(51, 1.0), Error);
  CHECK_THROWS_AS(sph_bessel_j(-1, 1.0), Error);
}

TEST_CASE("ball constants reject resonant radii") {
  for (const double R : {pi, 4.493409457909064}) {
    try {
      ball_constants(R, 1.0);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::resonant_radius);
    }
  }
}

TEST_CASE("ball constants at R = k+ = 1") {
  const BallConstants c = ball_constants(1.0, 1.0);
  CHECK(c.d == doctest::Approx(1.0 / (4.0 * pi * sph_bessel_j(0, 1.0))).epsilon(1e-13));
  CHECK(std::abs(c.d * 4.0 * pi * sph_bessel_j(0, 1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(c.d1 * 4.0 * pi * sph_bessel_j(1, 1.0) - 1.0) <= 1e-12);
}

TEST_CASE("ball constants agree between their closed forms") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> range(0.3, 3.0);
  int accepted = 0;
  while (accepted < 100) {
    const double R = range(rng);
    const double kplus = range(rng);
    const double z = kplus * R;
    if (std::abs(sph_bessel_j(0, z)) < 1e-6 || std::abs(sph_bessel_j(1, z)) < 1e-6) continue;
    ++accepted;
    const BallConstants c = ball_constants(R, kplus);  // throws if the forms disagree
    const double bracket = -kplus * kplus / (4.0 * pi) *
                           (sph_bessel_y(1, z) -
                            sph_bessel_j(1, z) * sph_bessel_y(0, z) / sph_bessel_j(0, z));
    CHECK(std::abs(c.d - bracket) <= 1e-10 * std::abs(c.d));
  }
}

TEST_CASE("sphere quadrature integrates polynomials and plane waves") {
  for (const int order : {2, 8, 48, 64}) {
    const auto nodes = sphere_quadrature(order);
    double total = 0.0;
    for (const auto& node : nodes) total += node.weight;
    CHECK(std::abs(total - 4.0 * pi) <= 1e-13 * 4.0 * pi);
  }
  for (const int order : {4, 16}) {
    const auto nodes = sphere_quadrature(order);
    double second = 0.0, sixth = 0.0, mixed = 0.0;
    for (const auto& node : nodes) {
      const double z2 = node.point.z() * node.point.z();
      second += node.weight * z2;
      sixth += node.weight * z2 * z2 * z2;
      mixed += node.weight * node.point.x() * node.point.x() * node.point.y() * node.point.y();
    }
    CHECK(std::abs(second - 4.0 * pi / 3.0) <= 1e-12);
    CHECK(std::abs(sixth - 4.0 * pi / 7.0) <= 1e-12);    // degree-6 zonal moment
    CHECK(std::abs(mixed - 4.0 * pi / 15.0) <= 1e-12);   // degree-4 mixed moment
  }
  const auto nodes = sphere_quadrature(48);
  const double R = 1.7;
  for (const double zR : {0.5, 3.3, 9.9}) {
    const Vec3 k = (zR / R) * Vec3(1, -2, 2).normalized();
    std::complex<double> integral(0.0, 0.0);
    for (const auto& node : nodes) {
      integral += node.weight * R * R * std::polar(1.0, k.dot(R * node.point));
    }
    const double exact = 4.0 * pi * R * R * sph_bessel_j(0, zR);
    CHECK(std::abs(integral - exact) <= 1e-10 * std::abs(exact));
  }
  CHECK_THROWS_AS(sphere_quadrature(1), Error);
  CHECK_THROWS_AS(sphere_quadrature(65), Error);
}

TEST_CASE("plane-wave moments") {
  const auto [s0, v0] = plane_wave_moments(Vec3::Zero(), 2.0);
  CHECK(std::abs(s0 - 16.0 * pi) <= 1e-13);
  CHECK(v0.norm() == 0.0);

  const auto [s_pi, v_pi] = plane_wave_moments(Vec3(pi, 0, 0), 1.0);
  CHECK(std::abs(s_pi) <= 1e-14 * 4.0 * pi);

  // quadrature oracle on random wave vectors
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  const auto nodes = sphere_quadrature(48);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 k(coord(rng), coord(rng), coord(rng));
    const double R = 0.5 + 0.35 * trial / 9.0 * 4.0;
    if (k.norm() * R > 10.0) continue;
    std::complex<double> scalar(0.0, 0.0);
    Eigen::Vector3cd vector = Eigen::Vector3cd::Zero();
    for (const auto& node : nodes) {
      const std::complex<double> phase = std::polar(1.0, k.dot(R * node.point));
      scalar += node.weight * R * R * phase;
      vector += node.weight * R * R * phase * node.point.cast<std::complex<double>>();
    }
    const auto [scalar_exact, vector_exact] = plane_wave_moments(k, R);
    CHECK(std::abs(scalar - scalar_exact) <= 1e-10 * (std::abs(scalar_exact) + 1.0));
    CHECK((vector - vector_exact).norm() <= 1e-10 * (vector_exact.norm() + 1.0));
    // the vector moment is i * (real scalar) * unit k
    CHECK(std::abs(vector_exact.real().norm()) <= 1e-300);
    if (vector_exact.imag().norm() > 1e-12) {
      CHECK(std::abs(std::abs(vector_exact.imag().normalized().dot(k.normalized())) - 1.0) <=
            1e-12);
    }
  }
}
