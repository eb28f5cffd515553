#include "cli_config.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "bloch/errors.hpp"

namespace bloch::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, "config: " + what);
}

Vec3 parse_vec3(const Json& node, const std::string& what) {
  if (!node.is_array() || node.size() != 3 || !node[0].is_number() || !node[1].is_number() ||
      !node[2].is_number()) {
    config_error(what + " must be an array of 3 numbers");
  }
  return Vec3(node[0].get<double>(), node[1].get<double>(), node[2].get<double>());
}

double parse_number(const Json& node, const std::string& what) {
  if (!node.is_number()) config_error(what + " must be a number");
  return node.get<double>();
}

}  // namespace

JobConfig JobConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open config '" + path + "'");
  }
  JobConfig config;
  try {
    config.raw = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
  if (!config.raw.is_object()) config_error("top level must be a JSON object");
  if (config.raw.contains("job")) {
    if (!config.raw["job"].is_string()) config_error("job must be a string");
    config.job_name = config.raw["job"].get<std::string>();
  } else {
    config.job_name = std::filesystem::path(path).stem().string();
  }
  if (config.job_name.empty()) config_error("job name must not be empty");
  return config;
}

LatticeSpec JobConfig::lattice() const {
  if (!raw.contains("lattice")) return LatticeSpec::cubic(two_pi);
  const Json& node = raw["lattice"];
  if (!node.is_object() || !node.contains("l1") || !node.contains("l2") || !node.contains("l3")) {
    config_error("lattice needs l1, l2, l3");
  }
  return reciprocal_basis(parse_vec3(node["l1"], "lattice.l1"),
                          parse_vec3(node["l2"], "lattice.l2"),
                          parse_vec3(node["l3"], "lattice.l3"));
}

MediumParams JobConfig::medium() const {
  if (!raw.contains("medium")) config_error("missing medium block");
  const Json& node = raw["medium"];
  for (const char* field : {"rho_plus", "rho_minus", "gamma_plus", "gamma_minus"}) {
    if (!node.contains(field)) config_error(std::string("medium.") + field + " is required");
  }
  return MediumParams::make(parse_number(node["rho_plus"], "medium.rho_plus"),
                            parse_number(node["rho_minus"], "medium.rho_minus"),
                            parse_number(node["gamma_plus"], "medium.gamma_plus"),
                            parse_number(node["gamma_minus"], "medium.gamma_minus"));
}

GeometryConfig JobConfig::geometry() const {
  if (!raw.contains("geometry")) config_error("missing geometry block");
  const Json& node = raw["geometry"];
  if (!node.is_object()) config_error("geometry must be an object");
  GeometryConfig geo;
  if (node.contains("a")) geo.a = parse_number(node["a"], "geometry.a");
  const bool has_mesh = node.contains("mesh");
  const bool has_shape = node.contains("shape");
  if (has_mesh && has_shape) config_error("geometry: give either shape or mesh, not both");
  if (has_mesh) {
    geo.sphere = false;
    if (!node["mesh"].is_string()) config_error("geometry.mesh must be a path string");
    geo.mesh_path = node["mesh"].get<std::string>();
    if (node.contains("flip_inverted")) {
      if (!node["flip_inverted"].is_boolean()) config_error("geometry.flip_inverted must be bool");
      geo.flip_inverted = node["flip_inverted"].get<bool>();
    }
  } else {
    if (has_shape && node["shape"].get<std::string>() != "sphere") {
      config_error("geometry.shape supports only \"sphere\" (or give geometry.mesh)");
    }
    if (node.contains("radius")) geo.radius = parse_number(node["radius"], "geometry.radius");
    if (node.contains("subdivisions")) {
      if (!node["subdivisions"].is_number_integer()) {
        config_error("geometry.subdivisions must be an integer");
      }
      geo.subdivisions = node["subdivisions"].get<int>();
    }
  }
  return geo;
}

Vec3 JobConfig::k() const {
  if (!raw.contains("k")) config_error("missing k (Bloch vector)");
  return parse_vec3(raw["k"], "k");
}

double JobConfig::tol() const {
  if (!raw.contains("tol")) return 1e-9;
  return parse_number(raw["tol"], "tol");
}

bool JobConfig::force() const {
  if (!raw.contains("force")) return false;
  if (!raw["force"].is_boolean()) config_error("force must be a boolean");
  return raw["force"].get<bool>();
}

Regime JobConfig::regime() const {
  if (!raw.contains("regime")) return Regime::fixed_k;
  const std::string name = raw["regime"].get<std::string>();
  if (name == "fixed_k") return Regime::fixed_k;
  if (name == "fixed_omega") return Regime::fixed_omega;
  config_error("regime must be \"fixed_k\" or \"fixed_omega\"");
}

bool JobConfig::has_scan() const { return raw.contains("scan"); }

ScanConfig JobConfig::scan() const {
  if (!has_scan()) config_error("missing scan block");
  const Json& node = raw["scan"];
  for (const char* field : {"direction", "k_range", "steps"}) {
    if (!node.contains(field)) config_error(std::string("scan.") + field + " is required");
  }
  ScanConfig scan;
  scan.direction = parse_vec3(node["direction"], "scan.direction").normalized();
  const Json& range = node["k_range"];
  if (!range.is_array() || range.size() != 2) config_error("scan.k_range must be [lo, hi]");
  scan.k_range = {parse_number(range[0], "scan.k_range[0]"),
                  parse_number(range[1], "scan.k_range[1]")};
  if (!node["steps"].is_number_integer()) config_error("scan.steps must be an integer");
  scan.steps = node["steps"].get<int>();
  return scan;
}

FieldGrid JobConfig::grid() const {
  if (!raw.contains("grid")) config_error("missing grid block");
  const Json& node = raw["grid"];
  for (const char* field : {"origin", "axes", "counts"}) {
    if (!node.contains(field)) config_error(std::string("grid.") + field + " is required");
  }
  FieldGrid grid;
  grid.origin = parse_vec3(node["origin"], "grid.origin");
  const Json& axes = node["axes"];
  if (!axes.is_array() || axes.size() != 3) config_error("grid.axes must be 3 step vectors");
  for (int i = 0; i < 3; ++i) grid.axes[i] = parse_vec3(axes[i], "grid.axes[i]");
  const Json& counts = node["counts"];
  if (!counts.is_array() || counts.size() != 3) config_error("grid.counts must be 3 integers");
  for (int i = 0; i < 3; ++i) {
    if (!counts[i].is_number_integer()) config_error("grid.counts must be integers");
    grid.counts[i] = counts[i].get<int>();
  }
  return grid;
}

int JobConfig::cluster_index() const {
  if (!raw.contains("cluster_index")) return 0;
  if (!raw["cluster_index"].is_number_integer()) config_error("cluster_index must be an integer");
  return raw["cluster_index"].get<int>();
}

std::complex<double> JobConfig::amplitude() const {
  if (!raw.contains("amplitude")) return {1.0, 0.0};
  const Json& node = raw["amplitude"];
  if (!node.is_array() || node.size() != 2) config_error("amplitude must be [re, im]");
  return {parse_number(node[0], "amplitude[0]"), parse_number(node[1], "amplitude[1]")};
}

bool JobConfig::force_bem_field() const {
  if (!raw.contains("force_bem")) return false;
  if (!raw["force_bem"].is_boolean()) config_error("force_bem must be a boolean");
  return raw["force_bem"].get<bool>();
}

std::string config_hash(const Json& config) {
  const std::string dump = config.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a 64
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace bloch::cli
