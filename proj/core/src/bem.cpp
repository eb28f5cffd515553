#include "bloch/bem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr int max_panels = 20'000;  // dense storage bound

inline double kernel_t0(const Vec3& xi, const Vec3& eta, const Vec3& n_xi) {
  const Vec3 d = xi - eta;
  const double r = d.norm();
  return d.dot(n_xi) / (4.0 * pi * r * r * r);
}

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void run_column_blocks(int n, unsigned threads, const std::function<void(int, int)>& block) {
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), n);
  if (workers <= 1) {
    block(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const int lo = static_cast<int>(static_cast<long>(n) * t / workers);
    const int hi = static_cast<int>(static_cast<long>(n) * (t + 1) / workers);
    pool.emplace_back(block, lo, hi);
  }
  for (auto& th : pool) th.join();
}

void check_unit(const Vec3& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::non_unit_direction, "direction must be a unit vector");
  }
}

}  // namespace

Eigen::MatrixXd assemble_adjoint_double_layer(const SurfaceMesh& mesh, unsigned threads) {
  const int n = mesh.panel_count();
  if (n > max_panels) {
    throw Error(ErrorCode::mesh_too_large,
                std::to_string(n) + " panels exceeds the dense bound of " +
                    std::to_string(max_panels));
  }
  Eigen::MatrixXd T(n, n);
  const auto& c = mesh.panel_centroids;
  const auto& nvec = mesh.panel_normals;
  const auto& area = mesh.panel_areas;

  run_column_blocks(n, threads, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      for (int i = 0; i < n; ++i) {
        T(i, j) = (i == j) ? 0.0 : kernel_t0(c[i], c[j], nvec[i]);
      }
    }
  });

  // Columnwise Gauss-identity calibration: the diagonal kernel value is the
  // one making sum_i A_i T0(c_i, c_j) = 1/2 exact, then every column is
  // scaled by its panel area to form T_ij = A_j T0(c_i, c_j).
  for (int j = 0; j < n; ++j) {
    double column = 0.0;
    for (int i = 0; i < n; ++i) column += area[i] * T(i, j);
    T(j, j) = (0.5 - column) / area[j];
    T.col(j) *= area[j];
  }
  return T;
}

namespace {

struct DensitySolve {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::MatrixXd system;
  double kappa = 0.0;
};

DensitySolve factor_system(const SurfaceMesh& mesh, double sigma, unsigned threads) {
  DensitySolve solve;
  solve.kappa = (sigma - 1.0) / (sigma + 1.0);
  solve.system = -solve.kappa * assemble_adjoint_double_layer(mesh, threads);
  solve.system.diagonal().array() += 0.5;
  solve.lu.compute(solve.system);
  return solve;
}

Eigen::VectorXd solve_for_direction(const SurfaceMesh& mesh, const DensitySolve& solve,
                                    const Vec3& direction) {
  const int n = mesh.panel_count();
  Eigen::VectorXd rhs(n);
  for (int j = 0; j < n; ++j) rhs(j) = solve.kappa * mesh.panel_normals[j].dot(direction);
  Eigen::VectorXd beta = solve.lu.solve(rhs);
  const double residual = (solve.system * beta - rhs).norm();
  if (residual > 1e-10 * std::max(rhs.norm(), 1e-300)) {
    throw Error(ErrorCode::singular_system,
                "collocation system residual " + std::to_string(residual) +
                    " exceeds tolerance; mesh or calibration is broken");
  }
  return beta;
}

}  // namespace

ReducedDensity solve_reduced_density(const SurfaceMesh& mesh, double sigma, const Vec3& direction,
                                     unsigned threads) {
  if (sigma <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  }
  check_unit(direction);
  ReducedDensity density;
  density.direction = direction;
  density.sigma = sigma;
  if (sigma == 1.0) {
    density.values = Eigen::VectorXd::Zero(mesh.panel_count());
    return density;
  }
  const DensitySolve solve = factor_system(mesh, sigma, threads);
  density.values = solve_for_direction(mesh, solve, direction);
  return density;
}

PolarizabilityTensor polarizability_tensor(const SurfaceMesh& mesh, double sigma,
                                           unsigned threads) {
  if (sigma <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  }
  PolarizabilityTensor tensor;
  tensor.sigma = sigma;
  tensor.source = TensorSource::bem;
  tensor.mesh_label = mesh.label.empty()
                          ? "faces=" + std::to_string(mesh.panel_count())
                          : mesh.label;
  if (sigma == 1.0) {
    tensor.X.setZero();
    tensor.symmetry_defect = 0.0;
    tensor.symmetry_tol = 1e-12;
    return tensor;
  }
  const DensitySolve solve = factor_system(mesh, sigma, threads);
  const int n = mesh.panel_count();
  for (int b = 0; b < 3; ++b) {
    const Eigen::VectorXd beta = solve_for_direction(mesh, solve, Vec3::Unit(b));
    for (int a = 0; a < 3; ++a) {
      double moment = 0.0;
      for (int j = 0; j < n; ++j) {
        moment += mesh.panel_centroids[j](a) * beta(j) * mesh.panel_areas[j];
      }
      tensor.X(a, b) = moment / mesh.enclosed_volume;
    }
  }
  tensor.symmetry_defect = (tensor.X - tensor.X.transpose()).cwiseAbs().maxCoeff();
  tensor.symmetry_tol = std::max(1e-12, 10.0 * tensor.symmetry_defect);
  return tensor;
}

PolarizabilityTensor analytic_sphere_tensor(double sigma) {
  if (sigma <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  }
  PolarizabilityTensor tensor;
  tensor.sigma = sigma;
  tensor.source = TensorSource::analytic_sphere;
  tensor.X = 3.0 * (sigma - 1.0) / (sigma + 2.0) * Eigen::Matrix3d::Identity();
  tensor.symmetry_defect = 0.0;
  tensor.symmetry_tol = 1e-12;
  return tensor;
}

Vec3 chi_for_direction(const PolarizabilityTensor& tensor, const Vec3& direction) {
  check_unit(direction);
  return tensor.X * direction;
}

}  // namespace bloch
