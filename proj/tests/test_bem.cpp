#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "bloch/bem.hpp"
#include "bloch/errors.hpp"
#include "bloch/mesh.hpp"

using namespace bloch;

namespace {

// Depolarization factor by 1D quadrature (composite Simpson after t = e^x - 1),
// the independent oracle for ellipsoid tensors.
double depolarization(double p, double q, double r) {
  auto f = [&](double x) {
    const double t = std::expm1(x);
    return (t + 1.0) /
           (std::pow(t + p * p, 1.5) * std::sqrt(t + q * q) * std::sqrt(t + r * r));
  };
  const double hi = std::log(1e10);
  const int n = 20000;  // even
  const double h = hi / n;
  double sum = f(0.0) + f(hi);
  for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return 0.5 * p * q * r * sum * h / 3.0;
}

SurfaceMesh egg_mesh(int subdivisions) {
  const SurfaceMesh ico = icosphere(subdivisions, 1.0);
  std::vector<Vec3> verts = ico.vertices;
  for (auto& v : verts) v *= (1.0 + 0.3 * v.z() + 0.1 * v.x());
  return SurfaceMesh::build(verts, ico.faces, "egg");
}

double kernel_direct(const Vec3& xi, const Vec3& eta, const Vec3& n_xi) {
  const Vec3 d = xi - eta;
  const double r = d.norm();
  return d.dot(n_xi) / (4.0 * pi * r * r * r);
}

}  // namespace

TEST_CASE("depolarization oracle sanity") {
  // sphere: 1/3 each; prolate (2,1,1): closed form via the eccentricity
  CHECK(depolarization(1, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  const double e = std::sqrt(3.0) / 2.0;
  const double closed = (1 - e * e) / (e * e * e) * (std::atanh(e) - e);
  const double quad = depolarization(2, 1, 1);
  CHECK(quad == doctest::Approx(closed).epsilon(1e-8));
  CHECK(depolarization(2, 1, 1) + 2.0 * depolarization(1, 2, 1) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("column Gauss identity holds exactly after calibration") {
  for (const SurfaceMesh& mesh : {icosphere(2, 1.0), egg_mesh(1)}) {
    const Eigen::MatrixXd T = assemble_adjoint_double_layer(mesh);
    const int n = mesh.panel_count();
    for (int j = 0; j < n; ++j) {
      double column = 0.0;
      for (int i = 0; i < n; ++i) column += mesh.panel_areas[i] * T(i, j) / mesh.panel_areas[j];
      CHECK(std::abs(column - 0.5) <= 1e-12);
    }
  }
}

TEST_CASE("assembly is independent of the thread count") {
  const SurfaceMesh mesh = icosphere(2, 1.0);
  const Eigen::MatrixXd T1 = assemble_adjoint_double_layer(mesh, 1);
  const Eigen::MatrixXd T4 = assemble_adjoint_double_layer(mesh, 4);
  CHECK((T1 - T4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("far entries equal the kernel value times the panel area") {
  const SurfaceMesh mesh = icosphere(1, 1.0);
  const Eigen::MatrixXd T = assemble_adjoint_double_layer(mesh);
  int i = 0, j = 0;
  double best = 0.0;
  for (int a = 0; a < mesh.panel_count(); ++a) {
    for (int b = 0; b < mesh.panel_count(); ++b) {
      const double dist = (mesh.panel_centroids[a] - mesh.panel_centroids[b]).norm();
      if (dist > best) {
        best = dist;
        i = a;
        j = b;
      }
    }
  }
  const double expected = mesh.panel_areas[j] * kernel_direct(mesh.panel_centroids[i],
                                                              mesh.panel_centroids[j],
                                                              mesh.panel_normals[i]);
  CHECK(T(i, j) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("action on constants approaches one half under refinement") {
  double previous = 1e300;
  for (int s = 1; s <= 3; ++s) {
    const SurfaceMesh mesh = icosphere(s, 1.0);
    const Eigen::MatrixXd T = assemble_adjoint_double_layer(mesh);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.panel_count());
    const double defect = ((T * ones).array() - 0.5).abs().maxCoeff();
    CHECK(defect < previous);
    previous = defect;
    if (s == 3) CHECK(defect <= 6e-3);
  }
}

TEST_CASE("degree-one harmonics are near eigenfunctions with eigenvalue 1/6") {
  double previous = 1e300;
  for (int s = 1; s <= 3; ++s) {
    const SurfaceMesh mesh = icosphere(s, 1.0);
    const Eigen::MatrixXd T = assemble_adjoint_double_layer(mesh);
    Eigen::VectorXd density(mesh.panel_count());
    for (int j = 0; j < mesh.panel_count(); ++j) density(j) = mesh.panel_normals[j].z();
    const Eigen::VectorXd image = T * density;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < mesh.panel_count(); ++j) {
      num += image(j) * density(j) * mesh.panel_areas[j];
      den += density(j) * density(j) * mesh.panel_areas[j];
    }
    const double rayleigh_error = std::abs(num / den - 1.0 / 6.0);
    CHECK(rayleigh_error < previous);
    previous = rayleigh_error;
    if (s == 3) CHECK(rayleigh_error <= 2e-3);
  }
}

TEST_CASE("unit contrast gives zero density and zero tensor") {
  const SurfaceMesh mesh = icosphere(1, 1.0);
  const ReducedDensity density = solve_reduced_density(mesh, 1.0, Vec3::UnitZ());
  CHECK(density.values.cwiseAbs().maxCoeff() == 0.0);
  const PolarizabilityTensor tensor = polarizability_tensor(mesh, 1.0);
  CHECK(tensor.X.cwiseAbs().maxCoeff() == 0.0);
  CHECK(tensor.source == TensorSource::bem);
}

TEST_CASE("sphere densities approach their closed forms") {
  for (const double sigma : {2.0, 1e6}) {
    const double factor = 3.0 * (sigma - 1.0) / (sigma + 2.0);
    double previous = 1e300;
    for (int s = 1; s <= 3; ++s) {
      const SurfaceMesh mesh = icosphere(s, 1.0);
      const ReducedDensity density = solve_reduced_density(mesh, sigma, Vec3::UnitZ());
      double err2 = 0.0, norm2 = 0.0;
      for (int j = 0; j < mesh.panel_count(); ++j) {
        const double exact = factor * mesh.panel_normals[j].z();
        err2 += (density.values(j) - exact) * (density.values(j) - exact) * mesh.panel_areas[j];
        norm2 += exact * exact * mesh.panel_areas[j];
      }
      const double rel = std::sqrt(err2 / norm2);
      CHECK(rel < previous);
      previous = rel;
      if (s == 3) CHECK(rel <= (sigma > 10.0 ? 1.5e-2 : 6e-3));
    }
  }
}

TEST_CASE("solved densities have an exactly vanishing weighted mean") {
  // The column calibration transfers the Gauss identity to the discrete
  // operator, so the solved density integrates to zero to roundoff even on
  // irregular shapes.
  for (int s = 1; s <= 3; ++s) {
    const SurfaceMesh mesh = egg_mesh(s);
    const ReducedDensity density = solve_reduced_density(mesh, 2.0, Vec3::UnitZ());
    double mean = 0.0, total = 0.0;
    for (int j = 0; j < mesh.panel_count(); ++j) {
      mean += density.values(j) * mesh.panel_areas[j];
      total += std::abs(density.values(j)) * mesh.panel_areas[j];
    }
    CHECK(std::abs(mean) / total <= 1e-12);
  }
}

TEST_CASE("sphere tensor matches the analytic value") {
  const SurfaceMesh coarse = icosphere(1, 1.0);
  const SurfaceMesh mesh = icosphere(2, 1.0);
  for (const double sigma : {0.5, 2.0, 10.0}) {
    const PolarizabilityTensor tensor = polarizability_tensor(mesh, sigma);
    const double exact = 3.0 * (sigma - 1.0) / (sigma + 2.0);
    const double rel = (tensor.X - exact * Eigen::Matrix3d::Identity()).norm() /
                       (std::abs(exact) * std::sqrt(3.0));
    CHECK(rel <= 1.2e-2);
    const double rel_coarse =
        (polarizability_tensor(coarse, sigma).X - exact * Eigen::Matrix3d::Identity()).norm() /
        (std::abs(exact) * std::sqrt(3.0));
    CHECK(rel < rel_coarse);  // refinement improves the tensor
    CHECK(tensor.symmetry_defect <= 1e-12);  // mirror symmetries of the mesh
    CHECK(tensor.source == TensorSource::bem);
  }
  const PolarizabilityTensor analytic = analytic_sphere_tensor(2.0);
  CHECK((analytic.X - 0.75 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(analytic.source == TensorSource::analytic_sphere);
  CHECK(analytic_sphere_tensor(1.0).X.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spheroid tensor matches the depolarization oracle") {
  Eigen::Matrix3d stretch = Eigen::Matrix3d::Identity();
  stretch(0, 0) = 2.0;
  const SurfaceMesh mesh = transformed(icosphere(2, 1.0), stretch, "spheroid 2:1:1");
  const double sigma = 5.0;
  const PolarizabilityTensor tensor = polarizability_tensor(mesh, sigma);
  const double L1 = depolarization(2, 1, 1);
  const double L2 = depolarization(1, 2, 1);
  const double major = (sigma - 1.0) / (1.0 + L1 * (sigma - 1.0));
  const double minor = (sigma - 1.0) / (1.0 + L2 * (sigma - 1.0));
  CHECK(std::abs(tensor.X(0, 0) - major) / major <= 1.2e-2);
  CHECK(std::abs(tensor.X(1, 1) - minor) / minor <= 1.2e-2);
  CHECK(std::abs(tensor.X(2, 2) - minor) / minor <= 1.2e-2);
  CHECK(std::abs(tensor.X(0, 1)) <= 1e-12);
  CHECK(std::abs(tensor.X(0, 2)) <= 1e-12);
  CHECK(std::abs(tensor.X(1, 2)) <= 1e-12);
}

TEST_CASE("tensor asymmetry stays at discretization level on oblique shapes") {
  const Vec3 axis = Vec3(1, 2, 2).normalized();
  const Eigen::Matrix3d stretch = Eigen::Matrix3d::Identity() + axis * axis.transpose();
  double first = 0.0;
  for (const int s : {1, 3}) {
    const SurfaceMesh mesh = transformed(icosphere(s, 1.0), stretch, "oblique");
    const PolarizabilityTensor tensor = polarizability_tensor(mesh, 5.0);
    CHECK(tensor.symmetry_defect <= 1e-4);
    CHECK(tensor.symmetry_defect <= tensor.symmetry_tol);
    if (s == 1) {
      first = tensor.symmetry_defect;
    } else {
      CHECK(tensor.symmetry_defect < first);
    }
  }
}

TEST_CASE("definiteness follows the sign of the contrast") {
  Eigen::Matrix3d stretch = Eigen::Matrix3d::Identity();
  stretch(0, 0) = 2.0;
  const SurfaceMesh sphere = icosphere(1, 1.0);
  const SurfaceMesh spheroid = transformed(icosphere(1, 1.0), stretch);
  for (const SurfaceMesh* mesh : {&sphere, &spheroid}) {
    for (const double sigma : {2.0, 10.0}) {
      const Eigen::Vector3d eig =
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(polarizability_tensor(*mesh, sigma).X)
              .eigenvalues();
      CHECK(eig.minCoeff() >= 0.0);
    }
    const Eigen::Vector3d eig =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(polarizability_tensor(*mesh, 0.5).X)
            .eigenvalues();
    CHECK(eig.maxCoeff() <= 0.0);
  }
}

TEST_CASE("chi_for_direction applies the tensor to unit incidence directions") {
  const PolarizabilityTensor sphere = analytic_sphere_tensor(2.0);
  const Vec3 d = Vec3(1, -2, 0.5).normalized();
  CHECK(chi_for_direction(sphere, d).isApprox(0.75 * d, 1e-14));
  CHECK(chi_for_direction(analytic_sphere_tensor(1.0), d).norm() == 0.0);
  try {
    chi_for_direction(sphere, Vec3(1.0, 0.1, 0.0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_unit_direction);
  }

  Eigen::Matrix3d stretch = Eigen::Matrix3d::Identity();
  stretch(0, 0) = 2.0;
  const PolarizabilityTensor spheroid =
      polarizability_tensor(transformed(icosphere(2, 1.0), stretch), 5.0);
  const double L1 = depolarization(2, 1, 1);
  const Vec3 chi = chi_for_direction(spheroid, Vec3::UnitX());
  CHECK(std::abs(chi.x() - 4.0 / (1.0 + 4.0 * L1)) / (4.0 / (1.0 + 4.0 * L1)) <= 1.2e-2);
}

TEST_CASE("oversized meshes are rejected before allocation") {
  const SurfaceMesh huge = icosphere(6, 1.0);  // 81920 panels
  try {
    assemble_adjoint_double_layer(huge);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::mesh_too_large);
  }
}

TEST_CASE("invalid contrast is rejected") {
  const SurfaceMesh mesh = icosphere(0, 1.0);
  CHECK_THROWS_AS(solve_reduced_density(mesh, 0.0, Vec3::UnitZ()), Error);
  CHECK_THROWS_AS(solve_reduced_density(mesh, -2.0, Vec3::UnitZ()), Error);
  try {
    solve_reduced_density(mesh, 2.0, Vec3(1, 1, 0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_unit_direction);
  }
}
