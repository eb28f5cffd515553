#include "bloch/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr double f_cap = 0.1;

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " must be positive");
  }
}

void check_fraction(const GeometryScale& geo) {
  if (geo.f >= f_cap && !geo.forced) {
    throw Error(ErrorCode::volume_fraction_too_large,
                "f = " + std::to_string(geo.f) + " is outside the asymptotic regime (cap " +
                    std::to_string(f_cap) + "); set force to override");
  }
}

}  // namespace

MediumParams MediumParams::make(double rho_plus, double rho_minus, double gamma_plus,
                                double gamma_minus) {
  require_positive(rho_plus, "rho_plus");
  require_positive(rho_minus, "rho_minus");
  require_positive(gamma_plus, "gamma_plus");
  require_positive(gamma_minus, "gamma_minus");
  MediumParams m;
  m.rho_plus = rho_plus;
  m.rho_minus = rho_minus;
  m.gamma_plus = gamma_plus;
  m.gamma_minus = gamma_minus;
  m.sigma = rho_plus / rho_minus;
  m.kappa = (m.sigma - 1.0) / (m.sigma + 1.0);
  m.g = gamma_minus / gamma_plus;
  m.c_plus = 1.0 / std::sqrt(gamma_plus * rho_plus);
  m.c_minus = 1.0 / std::sqrt(gamma_minus * rho_minus);
  m.nu_plus = 1.0 / rho_plus;
  m.nu_minus = 1.0 / rho_minus;
  return m;
}

GeometryScale GeometryScale::make(double a, double omega_hat_volume, double cell_volume,
                                  bool force) {
  require_positive(a, "a");
  require_positive(omega_hat_volume, "omega_hat_volume");
  require_positive(cell_volume, "cell_volume");
  GeometryScale geo;
  geo.a = a;
  geo.omega_hat_volume = omega_hat_volume;
  geo.cell_volume = cell_volume;
  geo.f = a * a * a * omega_hat_volume / cell_volume;
  geo.forced = force;
  check_fraction(geo);
  return geo;
}

ModeMatrix assemble_M0(const ExceptionalSet& exceptional, const PolarizabilityTensor& tensor,
                       const MediumParams& medium) {
  const double defect = (tensor.X - tensor.X.transpose()).cwiseAbs().maxCoeff();
  if (defect > std::max(tensor.symmetry_tol, 1e-12)) {
    throw Error(ErrorCode::asymmetric_tensor,
                "polarizability asymmetry " + std::to_string(defect) +
                    " exceeds the tensor's tolerance");
  }
  const int n = exceptional.order;
  const double knorm = exceptional.k.norm();
  ModeMatrix matrix;
  matrix.source = exceptional;
  matrix.directions.reserve(n);
  for (const auto& member : exceptional.members) {
    matrix.directions.push_back((exceptional.k - member.point) / knorm);
  }
  matrix.M0.resize(n, n);
  const double contrast = 1.0 - medium.g;
  for (int i = 0; i < n; ++i) {
    const Vec3 chi = tensor.X * matrix.directions[i];
    for (int j = 0; j < n; ++j) {
      matrix.M0(i, j) = contrast + chi.dot(matrix.directions[j]);
    }
  }
  return matrix;
}

EigenModes eigen_modes(const ModeMatrix& matrix) {
  const Eigen::MatrixXd sym = 0.5 * (matrix.M0 + matrix.M0.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::numeric_check_failed, "symmetric eigensolver did not converge");
  }
  EigenModes modes;
  const int n = static_cast<int>(sym.rows());
  modes.lambdas.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  modes.vectors = solver.eigenvectors();
  // Deterministic sign: the largest-magnitude component (lowest index on ties)
  // of each eigenvector is made positive.
  for (int s = 0; s < n; ++s) {
    int arg = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(modes.vectors(i, s)) > std::abs(modes.vectors(arg, s))) arg = i;
    }
    if (modes.vectors(arg, s) < 0.0) modes.vectors.col(s) *= -1.0;
  }
  if (n > 1) {
    const double radius = std::max(std::abs(modes.lambdas.front()), std::abs(modes.lambdas.back()));
    double min_gap = std::numeric_limits<double>::infinity();
    for (int s = 0; s + 1 < n; ++s) {
      min_gap = std::min(min_gap, modes.lambdas[s + 1] - modes.lambdas[s]);
    }
    modes.degenerate = min_gap <= 1e-8 * radius;
  }
  return modes;
}

namespace {

void check_mode_count(const ExceptionalSet& exceptional, const EigenModes& modes) {
  if (static_cast<int>(modes.lambdas.size()) != exceptional.order) {
    throw Error(ErrorCode::mismatched_inputs,
                "eigenmode count does not match the exceptional order");
  }
}

}  // namespace

DispersionResult frequencies_fixed_k(const ExceptionalSet& exceptional, const EigenModes& modes,
                                     const MediumParams& medium, const GeometryScale& geo) {
  check_mode_count(exceptional, modes);
  check_fraction(geo);
  DispersionResult result;
  result.regime = exceptional.order == 1 ? Regime::non_exceptional : Regime::fixed_k;
  result.k_ref = exceptional.k;
  result.f = geo.f;
  const double knorm = exceptional.k.norm();
  for (size_t s = 0; s < modes.lambdas.size(); ++s) {
    const double lambda = modes.lambdas[s];
    const double shift = 1.0 + lambda * geo.f;
    if (shift <= 0.0) {
      throw Error(ErrorCode::numeric_check_failed,
                  "1 + lambda f <= 0; the asymptotic branch is meaningless here");
    }
    DispersionMode mode;
    mode.lambda = lambda;
    mode.epsilon = 0.5 * lambda * geo.f;
    mode.mu = modes.vectors.col(static_cast<int>(s));
    mode.omega = medium.c_plus * knorm * std::sqrt(shift);
    result.modes.push_back(std::move(mode));
  }
  return result;
}

DispersionResult wavevectors_fixed_omega(const ExceptionalSet& exceptional,
                                         const EigenModes& modes, const GeometryScale& geo) {
  check_mode_count(exceptional, modes);
  check_fraction(geo);
  DispersionResult result;
  result.regime = Regime::fixed_omega;
  result.k_ref = exceptional.k;
  result.f = geo.f;
  for (size_t s = 0; s < modes.lambdas.size(); ++s) {
    const double lambda = modes.lambdas[s];
    DispersionMode mode;
    mode.lambda = lambda;
    mode.epsilon = 0.5 * lambda * geo.f;
    mode.mu = modes.vectors.col(static_cast<int>(s));
    mode.k = exceptional.k * (1.0 - 0.5 * lambda * geo.f);
    result.modes.push_back(std::move(mode));
  }
  return result;
}

std::pair<double, double> maxwell_effective(const MediumParams& medium, double f) {
  if (f < 0.0) {
    throw Error(ErrorCode::invalid_argument, "volume fraction must be nonnegative");
  }
  if (f >= f_cap) {
    throw Error(ErrorCode::volume_fraction_too_large,
                "Maxwell reduction is stated for f < " + std::to_string(f_cap));
  }
  const double gamma_bar = medium.gamma_plus * (1.0 - f) + medium.gamma_minus * f;
  const double nu_avg =
      medium.nu_plus *
      (1.0 + 3.0 * f * (medium.nu_minus - medium.nu_plus) / (medium.nu_minus + 2.0 * medium.nu_plus));
  return {gamma_bar, nu_avg};
}

ScanResult dispersion_scan(const Vec3& direction, std::pair<double, double> k_range, int steps,
                           const MediumParams& medium, const GeometryScale& geo,
                           const LatticeSpec& lattice, const PolarizabilityTensor& tensor,
                           double tol) {
  if (steps < 2) {
    throw Error(ErrorCode::invalid_argument, "a scan needs at least 2 steps");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::non_unit_direction, "scan direction must be a unit vector");
  }
  if (!(k_range.first > 0.0) || !(k_range.second >= k_range.first)) {
    throw Error(ErrorCode::invalid_argument, "k_range must satisfy 0 < lo <= hi");
  }
  check_fraction(geo);

  ScanResult scan;
  const double plane_radius = 2.0 * k_range.second * (1.0 + tol);
  for (int step = 0; step < steps; ++step) {
    const double abs_k =
        k_range.first + step * (k_range.second - k_range.first) / (steps - 1);
    const Vec3 k = abs_k * direction;
    const ExceptionalSet exceptional = find_exceptional_set(k, lattice, tol);
    const EigenModes modes = eigen_modes(assemble_M0(exceptional, tensor, medium));
    const DispersionResult fixed = frequencies_fixed_k(exceptional, modes, medium, geo);

    ScanRow row;
    row.abs_k = abs_k;
    row.order = exceptional.order;
    row.marked = exceptional.order > 1;
    row.nearest_plane = std::numeric_limits<double>::infinity();
    for (const auto& plane : plane_distances(k, lattice, plane_radius)) {
      row.nearest_plane = std::min(row.nearest_plane, plane.distance);
    }
    for (const auto& mode : fixed.modes) row.omegas.push_back(*mode.omega);
    row.lambdas = modes.lambdas;
    row.vectors = modes.vectors;
    scan.max_order = std::max(scan.max_order, row.order);
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

}  // namespace bloch
