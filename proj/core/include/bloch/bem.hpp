#pragma once

#include <Eigen/Dense>
#include <string>

#include "bloch/mesh.hpp"
#include "bloch/types.hpp"

namespace bloch {

/// Piecewise-constant panel density beta solving (1/2 I - kappa T) beta = kappa (n.d),
/// the real reduction of the transmission density jump for a unit incidence
/// direction d. kappa = (sigma - 1)/(sigma + 1).
struct ReducedDensity {
  Eigen::VectorXd values;  // beta_j per panel
  Vec3 direction;
  double sigma = 1.0;
};

enum class TensorSource { analytic_sphere, bem };

/// Real symmetric 3x3 polarizability tensor, chi = X d for a unit direction d.
/// Dimensionless: dipole response per unit inclusion volume.
struct PolarizabilityTensor {
  Eigen::Matrix3d X = Eigen::Matrix3d::Zero();
  double sigma = 1.0;
  TensorSource source = TensorSource::analytic_sphere;
  std::string mesh_label;
  double symmetry_defect = 0.0;  // max |X_ab - X_ba| measured at build time
  double symmetry_tol = 0.0;     // bound the producer vouches for
};

/// Dense collocation matrix of the adjoint double layer with kernel
/// T0(xi, eta) = (xi - eta).n_xi / (4 pi |xi - eta|^3): off-diagonal entries
/// T_ij = A_j T0(c_i, c_j), diagonal calibrated so the discrete Gauss identity
/// sum_i A_i T0(c_i, c_j) = 1/2 holds exactly for every column j.
/// threads = 0 uses all hardware threads; the result does not depend on it.
Eigen::MatrixXd assemble_adjoint_double_layer(const SurfaceMesh& mesh, unsigned threads = 0);

ReducedDensity solve_reduced_density(const SurfaceMesh& mesh, double sigma,
                                     const Vec3& direction, unsigned threads = 0);

/// X_ab = (1/|mesh volume|) sum_j (c_j)_a beta^(b)_j A_j with beta^(b) the
/// reduced density for incidence e_b. One assembly and factorization, three solves.
PolarizabilityTensor polarizability_tensor(const SurfaceMesh& mesh, double sigma,
                                           unsigned threads = 0);

/// X = 3 (sigma - 1)/(sigma + 2) I, exact for a ball of any radius.
PolarizabilityTensor analytic_sphere_tensor(double sigma);

/// chi = X d for a unit direction d (|d| = 1 within 1e-12).
Vec3 chi_for_direction(const PolarizabilityTensor& tensor, const Vec3& direction);

}  // namespace bloch
