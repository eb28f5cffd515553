#include "bloch/cluster.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

std::complex<double> eval_point(const ClusterSolution& cluster, const Vec3& x) {
  std::complex<double> sum(0.0, 0.0);
  for (int j = 0; j < static_cast<int>(cluster.shifts.size()); ++j) {
    const double phase = -(cluster.k_base - cluster.shifts[j]).dot(x);
    sum += cluster.mu(j) * std::polar(1.0, phase);
  }
  return cluster.amplitude * sum;
}

}  // namespace

std::vector<ClusterSolution> build_clusters(const DispersionResult& result,
                                            const ExceptionalSet& exceptional) {
  if ((result.k_ref - exceptional.k).norm() >
      1e-14 * std::max(1.0, exceptional.k.norm())) {
    throw Error(ErrorCode::mismatched_inputs,
                "dispersion result and exceptional set refer to different Bloch vectors");
  }
  if (static_cast<int>(result.modes.size()) != exceptional.order) {
    throw Error(ErrorCode::mismatched_inputs,
                "mode count does not match the exceptional order");
  }
  std::vector<ClusterSolution> clusters;
  clusters.reserve(result.modes.size());
  for (const auto& mode : result.modes) {
    if (mode.mu.size() != exceptional.order) {
      throw Error(ErrorCode::mismatched_inputs, "coefficient length does not match the order");
    }
    ClusterSolution cluster;
    cluster.regime = result.regime;
    cluster.k_base = (result.regime == Regime::fixed_omega && mode.k) ? *mode.k : exceptional.k;
    cluster.shifts.reserve(exceptional.members.size());
    for (const auto& member : exceptional.members) cluster.shifts.push_back(member.point);
    cluster.mu = mode.mu;
    cluster.omega = mode.omega;
    cluster.lambda = mode.lambda;
    cluster.epsilon = mode.epsilon;

    // All member plane waves must share one spatial frequency up to the
    // detection tolerance widened by the detuning |eps| (the fixed-omega
    // shifts move |k_s - m_j| by O(eps |k|)).
    const double k_norm = cluster.k_base.norm();
    const double allowance = (exceptional.tol + 3.0 * std::abs(cluster.epsilon)) * k_norm + 1e-14;
    for (const auto& shift : cluster.shifts) {
      if (std::abs((cluster.k_base - shift).norm() - k_norm) > allowance) {
        throw Error(ErrorCode::numeric_check_failed,
                    "cluster member spatial frequencies spread beyond the tolerance");
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::vector<std::complex<double>> evaluate(const ClusterSolution& cluster,
                                           const std::vector<Vec3>& points) {
  std::vector<std::complex<double>> values;
  values.reserve(points.size());
  for (const auto& x : points) values.push_back(eval_point(cluster, x));
  return values;
}

double bloch_residual(const ClusterSolution& cluster, const LatticeSpec& lattice,
                      const std::vector<Vec3>& samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::invalid_argument, "bloch_residual needs at least one sample point");
  }
  double residual = 0.0;
  for (const auto& x : samples) {
    const std::complex<double> u = eval_point(cluster, x);
    for (int i = 0; i < 3; ++i) {
      const Vec3& edge = lattice.edge(i);
      const std::complex<double> shifted = eval_point(cluster, x + edge);
      const std::complex<double> phase = std::polar(1.0, -cluster.k_base.dot(edge));
      residual = std::max(residual, std::abs(shifted - phase * u));
    }
  }
  return residual;
}

void export_field_grid(const ClusterSolution& cluster, const FieldGrid& grid,
                       const std::filesystem::path& path,
                       const std::vector<std::string>& preamble) {
  for (int count : grid.counts) {
    if (count < 1) {
      throw Error(ErrorCode::invalid_argument, "grid counts must be >= 1");
    }
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write field grid '" + path.string() + "'");
  }
  for (const auto& line : preamble) out << line << "\n";
  out << "x,y,z,re,im\n";
  char buf[160];
  for (int i0 = 0; i0 < grid.counts[0]; ++i0) {
    for (int i1 = 0; i1 < grid.counts[1]; ++i1) {
      for (int i2 = 0; i2 < grid.counts[2]; ++i2) {
        const Vec3 x = grid.origin + static_cast<double>(i0) * grid.axes[0] +
                       static_cast<double>(i1) * grid.axes[1] +
                       static_cast<double>(i2) * grid.axes[2];
        const std::complex<double> u = eval_point(cluster, x);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x.x(), x.y(), x.z(),
                      u.real(), u.imag());
        out << buf;
      }
    }
  }
  if (!out) {
    throw Error(ErrorCode::io_error, "failed writing field grid '" + path.string() + "'");
  }
}

}  // namespace bloch
