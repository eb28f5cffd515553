#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bloch/types.hpp"

namespace bloch {

/// Closed, consistently oriented triangle surface with per-panel geometry.
/// Coordinates are dimensionless (the rescaled inclusion); physical size
/// enters downstream through the volume fraction only.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<IntTriple> faces;  // vertex indices, CCW seen from outside
  std::vector<double> panel_areas;
  std::vector<Vec3> panel_centroids;
  std::vector<Vec3> panel_normals;  // unit, outward
  double enclosed_volume = 0.0;
  std::string label;

  int panel_count() const { return static_cast<int>(faces.size()); }
  double total_area() const;
  double max_panel_diameter() const;

  /// Computes panel geometry and validates the mesh: every edge shared by
  /// exactly two faces with opposite traversal, positive panel areas,
  /// sum of area vectors ~ 0, positive enclosed volume.
  static SurfaceMesh build(std::vector<Vec3> vertices, std::vector<IntTriple> faces,
                           std::string label = {});
};

/// Subdivided icosahedron projected onto the sphere of the given radius.
/// 20 * 4^subdivisions faces, 0 <= subdivisions <= 6.
SurfaceMesh icosphere(int subdivisions, double radius);

/// Applies a linear map to the vertices and rebuilds the panel geometry.
SurfaceMesh transformed(const SurfaceMesh& mesh, const Eigen::Matrix3d& map,
                        std::string label = {});

/// Reads an OFF file: "OFF" header, "V F E" counts, V vertex lines, F lines
/// "3 i j k" (0-based, CCW from outside). '#' starts a comment. With
/// flip_inverted set, a mesh whose enclosed volume comes out negative is
/// reloaded with all faces reversed instead of failing.
SurfaceMesh load_mesh(const std::filesystem::path& path, bool flip_inverted = false);

void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path);

}  // namespace bloch
