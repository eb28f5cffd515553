#include "bloch/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "bloch/errors.hpp"

namespace bloch {

double SurfaceMesh::total_area() const {
  double area = 0.0;
  for (double a : panel_areas) area += a;
  return area;
}

double SurfaceMesh::max_panel_diameter() const {
  double h = 0.0;
  for (const auto& f : faces) {
    const Vec3& a = vertices[f[0]];
    const Vec3& b = vertices[f[1]];
    const Vec3& c = vertices[f[2]];
    h = std::max({h, (a - b).norm(), (b - c).norm(), (c - a).norm()});
  }
  return h;
}

SurfaceMesh SurfaceMesh::build(std::vector<Vec3> vertices, std::vector<IntTriple> faces,
                               std::string label) {
  if (vertices.empty() || faces.empty()) {
    throw Error(ErrorCode::invalid_argument, "mesh needs vertices and faces");
  }
  const int nv = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= nv) {
        throw Error(ErrorCode::invalid_argument,
                    "face references vertex " + std::to_string(idx) + " out of range");
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error(ErrorCode::invalid_argument, "face with repeated vertex");
    }
  }

  // Each undirected edge must be traversed exactly once in each direction.
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(faces.size() * 3);
  auto key = [nv](int a, int b) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) +
           static_cast<std::uint64_t>(b);
  };
  for (const auto& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e];
      const int b = f[(e + 1) % 3];
      if (++directed[key(a, b)] > 1) {
        throw Error(ErrorCode::inconsistent_orientation,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") traversed twice in the same direction");
      }
    }
  }
  for (const auto& [k, count] : directed) {
    const int a = static_cast<int>(k / nv);
    const int b = static_cast<int>(k % nv);
    if (directed.find(key(b, a)) == directed.end()) {
      throw Error(ErrorCode::open_surface, "boundary edge (" + std::to_string(a) + "," +
                                               std::to_string(b) + ") has no partner face");
    }
  }

  SurfaceMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces = std::move(faces);
  mesh.label = std::move(label);
  mesh.panel_areas.reserve(mesh.faces.size());
  mesh.panel_centroids.reserve(mesh.faces.size());
  mesh.panel_normals.reserve(mesh.faces.size());

  Vec3 area_vector_sum = Vec3::Zero();
  double scale = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const Vec3 cross = (b - a).cross(c - a);
    const double norm = cross.norm();
    const double panel_scale = std::max({(b - a).norm(), (c - a).norm(), 1e-300});
    if (norm <= 1e-14 * panel_scale * panel_scale) {
      throw Error(ErrorCode::invalid_argument, "degenerate (zero-area) face");
    }
    const double area = 0.5 * norm;
    mesh.panel_areas.push_back(area);
    mesh.panel_centroids.push_back((a + b + c) / 3.0);
    mesh.panel_normals.push_back(cross / norm);
    area_vector_sum += 0.5 * cross;
    scale += area;
  }
  if (area_vector_sum.norm() > 1e-10 * scale) {
    throw Error(ErrorCode::inconsistent_orientation, "panel area vectors do not cancel");
  }

  double volume = 0.0;
  for (int j = 0; j < mesh.panel_count(); ++j) {
    volume += mesh.panel_centroids[j].dot(mesh.panel_normals[j]) * mesh.panel_areas[j];
  }
  mesh.enclosed_volume = volume / 3.0;
  if (mesh.enclosed_volume <= 0.0) {
    throw Error(ErrorCode::inverted_orientation,
                "enclosed volume is not positive; faces are oriented inward");
  }
  return mesh;
}

SurfaceMesh icosphere(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 6) {
    throw Error(ErrorCode::subdivision_too_large, "subdivisions must lie in [0, 6]");
  }
  if (radius <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "icosphere radius must be positive");
  }
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<IntTriple> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                  {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                  {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                  {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint_cache;
    auto midpoint = [&](int a, int b) {
      const auto k = std::minmax(a, b);
      if (auto it = midpoint_cache.find(k); it != midpoint_cache.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint_cache.emplace(k, idx);
      return idx;
    };
    std::vector<IntTriple> next;
    next.reserve(faces.size() * 4);
    for (const auto& t : faces) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  for (auto& v : verts) v *= radius;
  return SurfaceMesh::build(std::move(verts), std::move(faces),
                            "icosphere s=" + std::to_string(subdivisions));
}

SurfaceMesh transformed(const SurfaceMesh& mesh, const Eigen::Matrix3d& map, std::string label) {
  std::vector<Vec3> verts(mesh.vertices.size());
  for (size_t i = 0; i < verts.size(); ++i) verts[i] = map * mesh.vertices[i];
  std::vector<IntTriple> faces = mesh.faces;
  if (map.determinant() < 0.0) {
    for (auto& f : faces) std::swap(f[1], f[2]);
  }
  return SurfaceMesh::build(std::move(verts), std::move(faces),
                            label.empty() ? mesh.label + " (mapped)" : std::move(label));
}

namespace {

// Whitespace tokenizer over an OFF stream, '#' comments run to end of line.
class OffTokens {
 public:
  OffTokens(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::string next(const char* what) {
    while (buffer_.eof() || buffer_.peek() == EOF) {
      std::string line;
      if (!std::getline(in_, line)) {
        throw Error(ErrorCode::parse_error,
                    path_ + ":" + std::to_string(line_) + ": unexpected end of file, expected " +
                        std::string(what));
      }
      ++line_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      buffer_ = std::istringstream(line);
    }
    std::string token;
    buffer_ >> token;
    if (token.empty()) return next(what);
    return token;
  }

  bool exhausted() {
    std::string token;
    if (buffer_ >> token) return false;
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream rest(line);
      if (rest >> token) return false;
    }
    return true;
  }

  int line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::istream& in_;
  std::string path_;
  std::istringstream buffer_;
  int line_ = 0;
};

long parse_long(OffTokens& tokens, const char* what) {
  const std::string token = tokens.next(what);
  try {
    size_t pos = 0;
    const long value = std::stol(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, tokens.path() + ":" + std::to_string(tokens.line()) +
                                            ": expected " + std::string(what) + ", got '" +
                                            token + "'");
  }
}

double parse_double(OffTokens& tokens, const char* what) {
  const std::string token = tokens.next(what);
  try {
    size_t pos = 0;
    const double value = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, tokens.path() + ":" + std::to_string(tokens.line()) +
                                            ": expected " + std::string(what) + ", got '" +
                                            token + "'");
  }
}

}  // namespace

SurfaceMesh load_mesh(const std::filesystem::path& path, bool flip_inverted) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open mesh file '" + path.string() + "'");
  }
  OffTokens tokens(in, path.string());
  if (const std::string header = tokens.next("OFF header"); header != "OFF") {
    throw Error(ErrorCode::parse_error,
                path.string() + ":" + std::to_string(tokens.line()) + ": expected OFF header");
  }
  const long nv = parse_long(tokens, "vertex count");
  const long nf = parse_long(tokens, "face count");
  parse_long(tokens, "edge count");
  if (nv <= 0 || nf <= 0 || nv > 10'000'000 || nf > 10'000'000) {
    throw Error(ErrorCode::parse_error,
                path.string() + ":" + std::to_string(tokens.line()) + ": implausible counts");
  }
  std::vector<Vec3> vertices(nv);
  for (long i = 0; i < nv; ++i) {
    const double x = parse_double(tokens, "vertex coordinate");
    const double y = parse_double(tokens, "vertex coordinate");
    const double z = parse_double(tokens, "vertex coordinate");
    vertices[i] = Vec3(x, y, z);
  }
  std::vector<IntTriple> faces(nf);
  for (long i = 0; i < nf; ++i) {
    const long arity = parse_long(tokens, "face vertex count");
    if (arity != 3) {
      throw Error(ErrorCode::parse_error, path.string() + ":" + std::to_string(tokens.line()) +
                                              ": only triangle faces are supported");
    }
    for (int e = 0; e < 3; ++e) {
      const long idx = parse_long(tokens, "vertex index");
      if (idx < 0 || idx >= nv) {
        throw Error(ErrorCode::parse_error, path.string() + ":" + std::to_string(tokens.line()) +
                                                ": vertex index out of range");
      }
      faces[i][e] = static_cast<int>(idx);
    }
  }
  if (!tokens.exhausted()) {
    throw Error(ErrorCode::parse_error, path.string() + ":" + std::to_string(tokens.line()) +
                                            ": trailing data after the last face");
  }
  try {
    return SurfaceMesh::build(vertices, faces, path.filename().string());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::inverted_orientation && flip_inverted) {
      for (auto& f : faces) std::swap(f[1], f[2]);
      return SurfaceMesh::build(std::move(vertices), std::move(faces),
                                path.filename().string() + " (flipped)");
    }
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    throw Error(e.code(), path.string() + ": " + message);
  }
}

void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write mesh file '" + path.string() + "'");
  }
  out << "OFF\n" << mesh.vertices.size() << " " << mesh.faces.size() << " 0\n";
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& f : mesh.faces) {
    out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  }
  if (!out) {
    throw Error(ErrorCode::io_error, "failed writing mesh file '" + path.string() + "'");
  }
}

}  // namespace bloch
