#include "bloch/specfun.hpp"

#include <cmath>
#include <string>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr int max_order_n = 50;

void require_order(int n) {
  if (n < 0 || n > max_order_n) {
    throw Error(ErrorCode::invalid_argument,
                "Bessel order must lie in [0, " + std::to_string(max_order_n) + "]");
  }
}

double j0_impl(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
  }
  return std::sin(z) / z;
}

double j1_impl(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return z / 3.0 * (1.0 - z2 / 10.0 * (1.0 - z2 / 28.0));
  }
  return std::sin(z) / (z * z) - std::cos(z) / z;
}

// Downward (Miller) recurrence, normalized against j0 or j1, whichever is
// larger in magnitude. Stable for z below the turning point z ~ n.
double miller_j(int n, double z) {
  const int start = n + 25 + static_cast<int>(std::ceil(std::sqrt(40.0 * (n + 1))));
  double jp = 0.0;        // j_{k+1}
  double jc = 1e-30;      // j_k seed
  double saved = 0.0;
  for (int k = start; k >= 0; --k) {
    const double jm = (2.0 * k + 3.0) / z * jc - jp;  // j_{k-1+1} relation shifted
    jp = jc;
    jc = jm;
    if (k == n) saved = jc;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      saved *= 1e-250;
    }
  }
  // jc now holds the unnormalized j_0, jp the unnormalized j_1
  const double j0d = j0_impl(z);
  const double j1d = j1_impl(z);
  if (std::abs(j0d) >= std::abs(j1d)) return saved * (j0d / jc);
  return saved * (j1d / jp);
}

}  // namespace

double sph_bessel_j(int n, double z) {
  require_order(n);
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  if (z < 0.0) {
    const double value = sph_bessel_j(n, -z);
    return (n % 2 == 0) ? value : -value;
  }
  if (n == 0) return j0_impl(z);
  if (n == 1) return j1_impl(z);
  if (z >= n) {
    double jm = j0_impl(z), jc = j1_impl(z);
    for (int k = 1; k < n; ++k) {
      const double jn = (2.0 * k + 1.0) / z * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }
  return miller_j(n, z);
}

double sph_bessel_y(int n, double z) {
  require_order(n);
  if (z <= 0.0) {
    throw Error(ErrorCode::domain_error, "y_n requires z > 0");
  }
  const double y0 = -std::cos(z) / z;
  if (n == 0) return y0;
  const double y1 = -std::cos(z) / (z * z) - std::sin(z) / z;
  if (n == 1) return y1;
  double ym = y0, yc = y1;
  for (int k = 1; k < n; ++k) {
    const double yn = (2.0 * k + 1.0) / z * yc - ym;
    ym = yc;
    yc = yn;
  }
  return yc;
}

BallConstants ball_constants(double R, double kplus) {
  if (R <= 0.0 || kplus <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "ball_constants needs R > 0 and kplus > 0");
  }
  const double z = kplus * R;
  const double j0 = sph_bessel_j(0, z);
  const double j1 = sph_bessel_j(1, z);
  if (std::abs(j0) < 1e-10 || std::abs(j1) < 1e-10) {
    throw Error(ErrorCode::resonant_radius,
                "k+ R = " + std::to_string(z) + " is too close to a zero of j0 or j1");
  }
  const double area = 4.0 * pi * R * R;
  BallConstants c;
  c.R = R;
  c.kplus = kplus;
  c.d = 1.0 / (area * j0);
  c.d1 = kplus / (area * j1);

  // Cross-check against the bracketed Bessel combinations the reciprocal
  // forms were reduced from (via j_{n+1} y_n - j_n y_{n+1} = 1/z^2).
  const double y0 = sph_bessel_y(0, z);
  const double y1 = sph_bessel_y(1, z);
  const double y2 = sph_bessel_y(2, z);
  const double j2 = sph_bessel_j(2, z);
  const double d_alt = -kplus * kplus / (4.0 * pi) * (y1 - j1 * y0 / j0);
  const double d1_alt = -std::pow(kplus, 3) / (4.0 * pi) * (y2 * j1 - j2 * y1) / j1;
  if (std::abs(c.d - d_alt) > 1e-10 * std::abs(c.d) ||
      std::abs(c.d1 - d1_alt) > 1e-10 * std::abs(c.d1)) {
    throw Error(ErrorCode::numeric_check_failed,
                "ball constants disagree between their two closed forms");
  }
  return c;
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        break;
      }
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

std::vector<QuadratureNode> sphere_quadrature(int order) {
  if (order < 2 || order > 64) {
    throw Error(ErrorCode::order_out_of_range, "sphere quadrature order must lie in [2, 64]");
  }
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const int n_phi = 2 * order;
  const double w_phi = two_pi / n_phi;
  std::vector<QuadratureNode> nodes;
  nodes.reserve(static_cast<size_t>(order) * n_phi);
  for (int i = 0; i < order; ++i) {
    const double ct = x[i];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = w_phi * k;
      nodes.push_back({Vec3(st * std::cos(phi), st * std::sin(phi), ct), w[i] * w_phi});
    }
  }
  return nodes;
}

std::pair<std::complex<double>, Eigen::Vector3cd> plane_wave_moments(const Vec3& k, double R) {
  if (R <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "plane_wave_moments needs R > 0");
  }
  const double area = 4.0 * pi * R * R;
  const double kn = k.norm();
  if (kn == 0.0) {
    return {std::complex<double>(area, 0.0), Eigen::Vector3cd::Zero()};
  }
  const std::complex<double> scalar(area * sph_bessel_j(0, kn * R), 0.0);
  const Vec3 khat = k / kn;
  Eigen::Vector3cd vector = std::complex<double>(0.0, area * sph_bessel_j(1, kn * R)) *
                            khat.cast<std::complex<double>>();
  return {scalar, vector};
}

}  // namespace bloch
