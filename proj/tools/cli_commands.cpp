#include "cli_commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bloch/bem.hpp"
#include "bloch/cluster.hpp"
#include "bloch/errors.hpp"
#include "bloch/mesh.hpp"
#include "bloch/validate.hpp"

#ifndef BLOCH_VERSION
#define BLOCH_VERSION "0.0.0"
#endif

namespace bloch::cli {

namespace {

namespace fs = std::filesystem;

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json triple_json(const IntTriple& t) { return Json::array({t[0], t[1], t[2]}); }

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(v(i));
  return values;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::non_exceptional: return "non_exceptional";
    case Regime::fixed_k: return "fixed_k";
    case Regime::fixed_omega: return "fixed_omega";
  }
  return "unknown";
}

Json meta_block(const JobConfig& config, const char* command, double tol) {
  Json meta;
  meta["tool"] = "bloch";
  meta["version"] = BLOCH_VERSION;
  meta["command"] = command;
  meta["config_hash"] = config_hash(config.raw);
  Json tolerances;
  tolerances["exceptional_tol"] = tol;
  tolerances["f_cap"] = 0.1;
  tolerances["degenerate_gap"] = 1e-8;
  tolerances["solver_residual"] = 1e-10;
  tolerances["unit_direction"] = 1e-12;
  meta["tolerances"] = tolerances;
  return meta;
}

fs::path job_dir(const JobConfig& config, const Options& options) {
  fs::path dir = fs::path(options.out_root) / config.job_name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::io_error, "cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

void write_json(const fs::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  }
  out << doc.dump(2) << "\n";
  if (!out) {
    throw Error(ErrorCode::io_error, "failed writing '" + path.string() + "'");
  }
}

std::string csv_preamble(const JobConfig& config, const char* command) {
  return std::string("# tool=bloch version=") + BLOCH_VERSION + " command=" + command +
         " config_hash=" + config_hash(config.raw);
}

struct TensorJob {
  PolarizabilityTensor tensor;
  double omega_hat_volume = 0.0;
  Json mesh_stats;  // null for the analytic route
};

// Sphere geometry short-circuits to the analytic tensor unless BEM is forced;
// mesh geometry always runs the solver.
TensorJob tensor_for_geometry(const JobConfig& config, const Options& options) {
  const GeometryConfig geo = config.geometry();
  const MediumParams medium = config.medium();
  TensorJob job;
  const bool force_bem = options.force_bem || config.force_bem_field();
  if (geo.sphere && !force_bem) {
    job.tensor = analytic_sphere_tensor(medium.sigma);
    job.omega_hat_volume = 4.0 / 3.0 * pi * std::pow(geo.radius, 3);
    return job;
  }
  const SurfaceMesh mesh = geo.sphere ? icosphere(geo.subdivisions, geo.radius)
                                      : load_mesh(geo.mesh_path, geo.flip_inverted);
  job.tensor = polarizability_tensor(mesh, medium.sigma, options.threads);
  job.omega_hat_volume = mesh.enclosed_volume;
  job.mesh_stats["label"] = mesh.label;
  job.mesh_stats["panels"] = mesh.panel_count();
  job.mesh_stats["vertices"] = mesh.vertices.size();
  job.mesh_stats["enclosed_volume"] = mesh.enclosed_volume;
  job.mesh_stats["total_area"] = mesh.total_area();
  job.mesh_stats["max_panel_diameter"] = mesh.max_panel_diameter();
  return job;
}

Json members_json(const ExceptionalSet& set) {
  Json members = Json::array();
  for (const auto& member : set.members) {
    Json entry;
    entry["index"] = triple_json(member.index);
    entry["point"] = vec_json(member.point);
    members.push_back(entry);
  }
  return members;
}

}  // namespace

std::string resolve_out_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("BLOCH_OUT"); env != nullptr && env[0] != '\0') return env;
  return "out";
}

int cmd_exceptional(const JobConfig& config, const Options& options) {
  const LatticeSpec lattice = config.lattice();
  const double tol = config.tol();
  const ExceptionalSet set = find_exceptional_set(config.k(), lattice, tol);

  Json doc;
  doc["meta"] = meta_block(config, "exceptional", tol);
  doc["config"] = config.raw;
  Json result;
  result["k"] = vec_json(set.k);
  result["tol"] = set.tol;
  result["order"] = set.order;
  result["members"] = members_json(set);
  doc["result"] = result;

  const fs::path dir = job_dir(config, options);
  write_json(dir / "report.json", doc);
  std::printf("exceptional: |k| = %.12g, order = %d\n", set.k.norm(), set.order);
  for (const auto& member : set.members) {
    std::printf("  m = (%d, %d, %d)\n", member.index[0], member.index[1], member.index[2]);
  }
  std::printf("report: %s\n", (dir / "report.json").c_str());
  return 0;
}

int cmd_polarizability(const JobConfig& config, const Options& options) {
  const MediumParams medium = config.medium();
  const TensorJob job = tensor_for_geometry(config, options);

  Json doc;
  doc["meta"] = meta_block(config, "polarizability", config.tol());
  doc["config"] = config.raw;
  Json result;
  result["sigma"] = medium.sigma;
  result["source"] = job.tensor.source == TensorSource::analytic_sphere ? "analytic_sphere" : "bem";
  result["X"] = matrix_json(job.tensor.X);
  result["symmetry_defect"] = job.tensor.symmetry_defect;
  result["symmetry_tol"] = job.tensor.symmetry_tol;
  result["omega_hat_volume"] = job.omega_hat_volume;
  if (!job.mesh_stats.is_null()) result["mesh"] = job.mesh_stats;
  doc["result"] = result;

  const fs::path dir = job_dir(config, options);
  write_json(dir / "report.json", doc);
  std::printf("polarizability (%s): diag = %.9g %.9g %.9g, symmetry defect = %.3g\n",
              result["source"].get<std::string>().c_str(), job.tensor.X(0, 0), job.tensor.X(1, 1),
              job.tensor.X(2, 2), job.tensor.symmetry_defect);
  std::printf("report: %s\n", (dir / "report.json").c_str());
  return 0;
}

namespace {

Json mode_json(const DispersionMode& mode) {
  Json entry;
  entry["lambda"] = mode.lambda;
  entry["epsilon"] = mode.epsilon;
  entry["mu"] = vector_json(mode.mu);
  if (mode.omega) entry["omega"] = *mode.omega;
  if (mode.k) entry["k"] = vec_json(*mode.k);
  return entry;
}

int dispersion_fixed(const JobConfig& config, const Options& options) {
  const LatticeSpec lattice = config.lattice();
  const MediumParams medium = config.medium();
  const double tol = config.tol();
  const TensorJob job = tensor_for_geometry(config, options);
  const GeometryConfig geo_config = config.geometry();
  if (!geo_config.a) {
    throw Error(ErrorCode::invalid_argument, "config: geometry.a is required for dispersion");
  }
  const GeometryScale geo = GeometryScale::make(*geo_config.a, job.omega_hat_volume,
                                                lattice.cell_volume, config.force());
  const ExceptionalSet set = find_exceptional_set(config.k(), lattice, tol);
  const ModeMatrix matrix = assemble_M0(set, job.tensor, medium);
  const EigenModes modes = eigen_modes(matrix);
  const Regime regime = config.regime();
  const DispersionResult result = regime == Regime::fixed_omega
                                      ? wavevectors_fixed_omega(set, modes, geo)
                                      : frequencies_fixed_k(set, modes, medium, geo);

  Json doc;
  doc["meta"] = meta_block(config, "dispersion", tol);
  doc["config"] = config.raw;
  Json res;
  res["regime"] = regime_name(result.regime);
  res["k"] = vec_json(result.k_ref);
  res["f"] = result.f;
  res["order"] = set.order;
  res["members"] = members_json(set);
  res["M0"] = matrix_json(matrix.M0);
  res["M_scale"] = lattice.cell_volume * set.k.squaredNorm() * geo.f;
  res["degenerate"] = modes.degenerate;
  Json mode_list = Json::array();
  for (const auto& mode : result.modes) mode_list.push_back(mode_json(mode));
  res["modes"] = mode_list;
  if (!job.mesh_stats.is_null()) res["mesh"] = job.mesh_stats;
  doc["result"] = res;

  const fs::path dir = job_dir(config, options);
  write_json(dir / "report.json", doc);

  if (result.regime != Regime::fixed_omega) {
    std::ofstream csv(dir / "data.csv");
    if (!csv) throw Error(ErrorCode::io_error, "cannot write data.csv");
    csv << csv_preamble(config, "dispersion") << "\n";
    csv << "abs_k,order";
    for (int s = 1; s <= set.order; ++s) csv << ",omega_" << s;
    csv << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", set.k.norm());
    csv << buf << "," << set.order;
    for (const auto& mode : result.modes) {
      std::snprintf(buf, sizeof buf, ",%.17g", *mode.omega);
      csv << buf;
    }
    csv << "\n";
  }

  std::printf("dispersion (%s): order %d, f = %.6g%s\n", regime_name(result.regime), set.order,
              geo.f, modes.degenerate ? " [degenerate spectrum]" : "");
  for (size_t s = 0; s < result.modes.size(); ++s) {
    const auto& mode = result.modes[s];
    if (mode.omega) {
      std::printf("  lambda_%zu = %.12g  omega_%zu = %.12g\n", s + 1, mode.lambda, s + 1,
                  *mode.omega);
    } else {
      std::printf("  lambda_%zu = %.12g  |k_%zu| = %.12g\n", s + 1, mode.lambda, s + 1,
                  mode.k->norm());
    }
  }
  std::printf("report: %s\n", (dir / "report.json").c_str());
  return 0;
}

int dispersion_scan_cmd(const JobConfig& config, const Options& options) {
  const LatticeSpec lattice = config.lattice();
  const MediumParams medium = config.medium();
  const double tol = config.tol();
  const TensorJob job = tensor_for_geometry(config, options);
  const GeometryConfig geo_config = config.geometry();
  if (!geo_config.a) {
    throw Error(ErrorCode::invalid_argument, "config: geometry.a is required for dispersion");
  }
  const GeometryScale geo = GeometryScale::make(*geo_config.a, job.omega_hat_volume,
                                                lattice.cell_volume, config.force());
  const ScanConfig scan_config = config.scan();
  const ScanResult scan = dispersion_scan(scan_config.direction, scan_config.k_range,
                                          scan_config.steps, medium, geo, lattice, job.tensor,
                                          tol);

  const fs::path dir = job_dir(config, options);
  {
    std::ofstream csv(dir / "data.csv");
    if (!csv) throw Error(ErrorCode::io_error, "cannot write data.csv");
    csv << csv_preamble(config, "dispersion") << "\n";
    csv << "abs_k,order";
    for (int s = 1; s <= scan.max_order; ++s) csv << ",omega_" << s;
    csv << "\n";
    char buf[64];
    for (const auto& row : scan.rows) {
      std::snprintf(buf, sizeof buf, "%.17g", row.abs_k);
      csv << buf << "," << row.order;
      for (int s = 0; s < scan.max_order; ++s) {
        if (s < static_cast<int>(row.omegas.size())) {
          std::snprintf(buf, sizeof buf, ",%.17g", row.omegas[s]);
          csv << buf;
        } else {
          csv << ",";
        }
      }
      csv << "\n";
    }
  }

  Json doc;
  doc["meta"] = meta_block(config, "dispersion", tol);
  doc["config"] = config.raw;
  Json res;
  res["direction"] = vec_json(scan_config.direction);
  res["k_range"] = Json::array({scan_config.k_range.first, scan_config.k_range.second});
  res["steps"] = scan_config.steps;
  res["f"] = geo.f;
  res["max_order"] = scan.max_order;
  Json rows = Json::array();
  for (const auto& row : scan.rows) {
    Json entry;
    entry["abs_k"] = row.abs_k;
    entry["order"] = row.order;
    entry["marked"] = row.marked;
    entry["nearest_plane"] = std::isfinite(row.nearest_plane) ? Json(row.nearest_plane) : Json();
    entry["omegas"] = Json(row.omegas);
    entry["lambdas"] = Json(row.lambdas);
    entry["vectors"] = matrix_json(row.vectors);
    rows.push_back(entry);
  }
  res["rows"] = rows;
  if (!job.mesh_stats.is_null()) res["mesh"] = job.mesh_stats;
  doc["result"] = res;
  write_json(dir / "report.json", doc);

  int marked = 0;
  for (const auto& row : scan.rows) marked += row.marked ? 1 : 0;
  std::printf("dispersion scan: %zu samples, %d marked exceptional (max order %d)\n",
              scan.rows.size(), marked, scan.max_order);
  std::printf("data: %s\nreport: %s\n", (dir / "data.csv").c_str(),
              (dir / "report.json").c_str());
  return 0;
}

}  // namespace

int cmd_dispersion(const JobConfig& config, const Options& options) {
  if (config.has_scan() && config.raw.contains("k")) {
    throw Error(ErrorCode::invalid_argument,
                "config: give either a fixed k or a scan block, not both");
  }
  return config.has_scan() ? dispersion_scan_cmd(config, options)
                           : dispersion_fixed(config, options);
}

int cmd_cluster(const JobConfig& config, const Options& options) {
  const LatticeSpec lattice = config.lattice();
  const MediumParams medium = config.medium();
  const double tol = config.tol();
  const TensorJob job = tensor_for_geometry(config, options);
  const GeometryConfig geo_config = config.geometry();
  if (!geo_config.a) {
    throw Error(ErrorCode::invalid_argument, "config: geometry.a is required for cluster");
  }
  const GeometryScale geo = GeometryScale::make(*geo_config.a, job.omega_hat_volume,
                                                lattice.cell_volume, config.force());
  const ExceptionalSet set = find_exceptional_set(config.k(), lattice, tol);
  const EigenModes modes = eigen_modes(assemble_M0(set, job.tensor, medium));
  const Regime regime = config.regime();
  const DispersionResult result = regime == Regime::fixed_omega
                                      ? wavevectors_fixed_omega(set, modes, geo)
                                      : frequencies_fixed_k(set, modes, medium, geo);
  std::vector<ClusterSolution> clusters = build_clusters(result, set);
  const std::complex<double> amplitude = config.amplitude();
  for (auto& cluster : clusters) cluster.amplitude = amplitude;

  const int index = config.cluster_index();
  if (index < 0 || index >= static_cast<int>(clusters.size())) {
    throw Error(ErrorCode::invalid_argument,
                "config: cluster_index out of range (order is " + std::to_string(set.order) + ")");
  }

  // Spot-check quasi-periodicity on a fixed sample set before exporting.
  std::vector<Vec3> samples = {Vec3(0.1, 0.2, 0.3), Vec3(-0.4, 0.9, 1.7), Vec3(2.1, -1.2, 0.5)};
  const double residual = bloch_residual(clusters[index], lattice, samples);

  const fs::path dir = job_dir(config, options);
  export_field_grid(clusters[index], config.grid(), dir / "fields.csv",
                    {csv_preamble(config, "cluster")});

  Json doc;
  doc["meta"] = meta_block(config, "cluster", tol);
  doc["config"] = config.raw;
  Json res;
  res["regime"] = regime_name(result.regime);
  res["k"] = vec_json(set.k);
  res["f"] = geo.f;
  res["order"] = set.order;
  res["members"] = members_json(set);
  res["degenerate"] = modes.degenerate;
  res["exported_cluster"] = index;
  res["bloch_residual_spot_check"] = residual;
  Json list = Json::array();
  for (size_t s = 0; s < clusters.size(); ++s) {
    const auto& cluster = clusters[s];
    Json entry;
    entry["index"] = s;
    entry["lambda"] = cluster.lambda;
    entry["epsilon"] = cluster.epsilon;
    entry["mu"] = vector_json(cluster.mu);
    entry["k_base"] = vec_json(cluster.k_base);
    entry["spatial_frequency"] = cluster.k_base.norm();
    if (cluster.omega) entry["omega"] = *cluster.omega;
    list.push_back(entry);
  }
  res["clusters"] = list;
  doc["result"] = res;
  write_json(dir / "report.json", doc);

  std::printf("cluster (%s): order %d, exported cluster %d, residual spot check %.3g\n",
              regime_name(result.regime), set.order, index, residual);
  std::printf("fields: %s\nreport: %s\n", (dir / "fields.csv").c_str(),
              (dir / "report.json").c_str());
  return 0;
}

int cmd_validate(const Options& options) {
  const auto checks = run_acceptance_checks(options.threads);
  bool all_pass = true;
  std::printf("%3s  %-30s %-6s %s\n", "#", "check", "result", "detail");
  for (const auto& check : checks) {
    all_pass = all_pass && check.pass;
    std::printf("%3d  %-30s %-6s %s\n", check.id, check.name.c_str(),
                check.pass ? "PASS" : "FAIL", check.detail.c_str());
  }
  std::printf("validate: %s\n", all_pass ? "all checks passed" : "FAILURES detected");
  return all_pass ? 0 : 1;
}

}  // namespace bloch::cli
