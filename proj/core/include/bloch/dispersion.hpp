#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "bloch/bem.hpp"
#include "bloch/lattice.hpp"
#include "bloch/types.hpp"

namespace bloch {

/// Host (+) and inclusion (-) material constants with the derived ratios used
/// throughout: sigma = rho+/rho-, kappa = (sigma-1)/(sigma+1), g = gamma-/gamma+,
/// c = 1/sqrt(gamma rho), nu = 1/rho.
struct MediumParams {
  double rho_plus = 1.0, rho_minus = 1.0;
  double gamma_plus = 1.0, gamma_minus = 1.0;
  double sigma = 1.0, kappa = 0.0, g = 1.0;
  double c_plus = 1.0, c_minus = 1.0;
  double nu_plus = 1.0, nu_minus = 1.0;

  static MediumParams make(double rho_plus, double rho_minus, double gamma_plus,
                           double gamma_minus);
};

/// Inclusion scale a and the volume fraction f = a^3 |mesh volume| / |cell volume|.
/// f >= 0.1 is rejected unless force is set (asymptotic validity guard).
struct GeometryScale {
  double a = 0.0;
  double omega_hat_volume = 0.0;
  double cell_volume = 0.0;
  double f = 0.0;
  bool forced = false;

  static GeometryScale make(double a, double omega_hat_volume, double cell_volume,
                            bool force = false);
};

/// Mode matrix M0_ij = 1 - gamma-/gamma+ + chi_i . d_j over the unit directions
/// d_j = (k - m_j)/|k| of an exceptional set.
struct ModeMatrix {
  Eigen::MatrixXd M0;
  std::vector<Vec3> directions;
  ExceptionalSet source;
};

/// Eigenpairs of M0, eigenvalues ascending, eigenvectors orthonormal columns.
/// degenerate flags a spectral gap below 1e-8 times the spectral radius; the
/// branch formulas assume distinct eigenvalues, so degeneracy is reported
/// rather than resolved.
struct EigenModes {
  std::vector<double> lambdas;
  Eigen::MatrixXd vectors;
  bool degenerate = false;
};

enum class Regime { non_exceptional, fixed_k, fixed_omega };

struct DispersionMode {
  double lambda = 0.0;
  double epsilon = 0.0;  // lambda f / 2, the relative detuning
  Eigen::VectorXd mu;
  std::optional<double> omega;  // fixed-k regimes
  std::optional<Vec3> k;        // fixed-omega regime
};

struct DispersionResult {
  Regime regime = Regime::non_exceptional;
  Vec3 k_ref = Vec3::Zero();
  double f = 0.0;
  std::vector<DispersionMode> modes;
};

ModeMatrix assemble_M0(const ExceptionalSet& exceptional, const PolarizabilityTensor& tensor,
                       const MediumParams& medium);

EigenModes eigen_modes(const ModeMatrix& matrix);

/// Fixed Bloch vector: omega_s = c+ |k| sqrt(1 + lambda_s f), one frequency per mode.
DispersionResult frequencies_fixed_k(const ExceptionalSet& exceptional, const EigenModes& modes,
                                     const MediumParams& medium, const GeometryScale& geo);

/// Fixed frequency omega = c+ |k*|: k_s = k* (1 - lambda_s f / 2), collinear shifts.
DispersionResult wavevectors_fixed_omega(const ExceptionalSet& exceptional,
                                         const EigenModes& modes, const GeometryScale& geo);

/// Effective-medium reduction for spheres: returns (gamma_bar, nu_avg) with
/// gamma_bar = gamma+ (1-f) + gamma- f and Maxwell's formula for <nu>.
std::pair<double, double> maxwell_effective(const MediumParams& medium, double f);

struct ScanRow {
  double abs_k = 0.0;
  int order = 1;
  bool marked = false;          // order > 1
  double nearest_plane = 0.0;   // min plane distance among enumerated m
  std::vector<double> omegas;   // ascending with lambda
  std::vector<double> lambdas;
  Eigen::MatrixXd vectors;      // eigenvector columns
};

struct ScanResult {
  std::vector<ScanRow> rows;
  int max_order = 1;
};

/// Samples |k| along a unit direction and evaluates all fixed-k branches per
/// sample; rows with exceptional order > 1 are marked.
ScanResult dispersion_scan(const Vec3& direction, std::pair<double, double> k_range, int steps,
                           const MediumParams& medium, const GeometryScale& geo,
                           const LatticeSpec& lattice, const PolarizabilityTensor& tensor,
                           double tol = 1e-9);

}  // namespace bloch
