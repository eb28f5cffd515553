#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>

#include "bloch/cluster.hpp"
#include "bloch/dispersion.hpp"
#include "bloch/lattice.hpp"
#include "bloch/types.hpp"

namespace bloch::cli {

using Json = nlohmann::ordered_json;

struct Options {
  std::string config_path;
  std::string out_root;  // resolved from --out, BLOCH_OUT, then "out"
  bool force_bem = false;
  unsigned threads = 0;
};

struct GeometryConfig {
  std::optional<double> a;
  bool sphere = true;
  double radius = 1.0;
  int subdivisions = 3;
  std::string mesh_path;
  bool flip_inverted = false;
};

struct ScanConfig {
  Vec3 direction;
  std::pair<double, double> k_range;
  int steps = 2;
};

/// One JSON document per job; commands pull and validate only the blocks they
/// need, so e.g. `exceptional` runs without a medium block.
struct JobConfig {
  Json raw;
  std::string job_name;

  static JobConfig load(const std::string& path);

  LatticeSpec lattice() const;  // default: simple cubic with edge 2 pi
  MediumParams medium() const;
  GeometryConfig geometry() const;
  Vec3 k() const;
  double tol() const;     // default 1e-9
  bool force() const;     // volume-fraction cap override
  Regime regime() const;  // default fixed_k
  ScanConfig scan() const;
  bool has_scan() const;
  FieldGrid grid() const;
  int cluster_index() const;
  std::complex<double> amplitude() const;
  bool force_bem_field() const;
};

std::string config_hash(const Json& config);

}  // namespace bloch::cli
