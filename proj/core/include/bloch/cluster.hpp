#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bloch/dispersion.hpp"
#include "bloch/lattice.hpp"
#include "bloch/types.hpp"

namespace bloch {

/// Leading-order cluster u(x) = C sum_j mu_j exp(-i (k_base - m_j).x).
/// The remainder of the full solution is O(a) and is not synthesized.
struct ClusterSolution {
  Regime regime = Regime::non_exceptional;
  Vec3 k_base = Vec3::Zero();   // shared k (fixed-k) or the per-mode k_s (fixed-omega)
  std::vector<Vec3> shifts;     // Cartesian reciprocal points m_j, first is zero
  Eigen::VectorXd mu;
  std::complex<double> amplitude{1.0, 0.0};
  std::optional<double> omega;
  double lambda = 0.0;
  double epsilon = 0.0;
};

/// One cluster per mode of the dispersion result. The result and the
/// exceptional set must refer to the same Bloch vector.
std::vector<ClusterSolution> build_clusters(const DispersionResult& result,
                                            const ExceptionalSet& exceptional);

std::vector<std::complex<double>> evaluate(const ClusterSolution& cluster,
                                           const std::vector<Vec3>& points);

/// max over samples x and cell edges l_i of |u(x + l_i) - exp(-i k_base.l_i) u(x)|.
/// Zero up to roundoff for genuine reciprocal-lattice shifts.
double bloch_residual(const ClusterSolution& cluster, const LatticeSpec& lattice,
                      const std::vector<Vec3>& samples);

struct FieldGrid {
  Vec3 origin = Vec3::Zero();
  std::array<Vec3, 3> axes{};  // step vectors
  std::array<int, 3> counts{1, 1, 1};
};

/// CSV with header "x,y,z,re,im", one row per grid point, outer axis first.
/// Extra preamble lines are written verbatim before the header.
void export_field_grid(const ClusterSolution& cluster, const FieldGrid& grid,
                       const std::filesystem::path& path,
                       const std::vector<std::string>& preamble = {});

}  // namespace bloch
