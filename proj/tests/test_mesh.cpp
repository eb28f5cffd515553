#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "bloch/errors.hpp"
#include "bloch/mesh.hpp"

using namespace bloch;

namespace {

namespace fs = std::filesystem;

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("icosphere face counts and geometry") {
  const SurfaceMesh base = icosphere(0, 1.0);
  CHECK(base.panel_count() == 20);
  CHECK(base.vertices.size() == 12);

  const SurfaceMesh two = icosphere(2, 1.0);
  CHECK(two.panel_count() == 320);

  // inscribed flat panels undershoot the ball volume at second order in the
  // panel size: the deficit shrinks ~4x per subdivision
  const SurfaceMesh mid = icosphere(3, 1.0);
  const SurfaceMesh fine = icosphere(4, 1.0);
  CHECK(fine.panel_count() == 5120);
  const double ball = 4.0 * pi / 3.0;
  const double deficit_mid = (ball - mid.enclosed_volume) / ball;
  const double deficit_fine = (ball - fine.enclosed_volume) / ball;
  CHECK(deficit_fine <= 3e-3);
  CHECK(deficit_mid / deficit_fine >= 3.0);

  // outward orientation and closed-surface identities
  for (int j = 0; j < two.panel_count(); ++j) {
    CHECK(two.panel_centroids[j].dot(two.panel_normals[j]) > 0.0);
  }
  Vec3 area_sum = Vec3::Zero();
  for (int j = 0; j < two.panel_count(); ++j) {
    area_sum += two.panel_areas[j] * two.panel_normals[j];
  }
  CHECK(area_sum.norm() <= 1e-12 * two.total_area());
}

TEST_CASE("icosphere radius scaling") {
  const SurfaceMesh unit = icosphere(2, 1.0);
  const SurfaceMesh big = icosphere(2, 2.0);
  CHECK(big.enclosed_volume == doctest::Approx(8.0 * unit.enclosed_volume).epsilon(1e-12));
}

TEST_CASE("icosphere argument guards") {
  CHECK(code_of([] { icosphere(7, 1.0); }) == ErrorCode::subdivision_too_large);
  CHECK(code_of([] { icosphere(-1, 1.0); }) == ErrorCode::subdivision_too_large);
  CHECK(code_of([] { icosphere(2, 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("off round trip") {
  const SurfaceMesh icosahedron = icosphere(0, 1.0);
  const fs::path ico_path = fs::temp_directory_path() / "bloch_icosahedron.off";
  save_off(icosahedron, ico_path);
  CHECK(load_mesh(ico_path).panel_count() == 20);

  const SurfaceMesh mesh = icosphere(1, 1.0);
  const fs::path path = fs::temp_directory_path() / "bloch_roundtrip.off";
  save_off(mesh, path);
  const SurfaceMesh loaded = load_mesh(path);
  CHECK(loaded.panel_count() == mesh.panel_count());
  CHECK(loaded.vertices.size() == mesh.vertices.size());
  CHECK(loaded.enclosed_volume == doctest::Approx(mesh.enclosed_volume).epsilon(1e-15));
}

TEST_CASE("off parser accepts comments and reports malformed content") {
  const fs::path good = write_temp("bloch_good.off",
                                   "# icosahedron-free minimal closed surface\n"
                                   "OFF\n"
                                   "4 4 0  # tetrahedron\n"
                                   "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                                   "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  const SurfaceMesh tet = load_mesh(good);
  CHECK(tet.panel_count() == 4);
  CHECK(tet.enclosed_volume == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  const fs::path bad_header = write_temp("bloch_badheader.off", "OFX\n4 4 0\n");
  CHECK(code_of([&] { load_mesh(bad_header); }) == ErrorCode::parse_error);

  const fs::path bad_arity = write_temp("bloch_badarity.off",
                                        "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2 3\n");
  CHECK(code_of([&] { load_mesh(bad_arity); }) == ErrorCode::parse_error);

  const fs::path bad_index =
      write_temp("bloch_badindex.off", "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 9\n");
  CHECK(code_of([&] { load_mesh(bad_index); }) == ErrorCode::parse_error);

  const fs::path truncated = write_temp("bloch_trunc.off", "OFF\n4 4 0\n0 0 0\n1 0 0\n");
  CHECK(code_of([&] { load_mesh(truncated); }) == ErrorCode::parse_error);

  const fs::path trailing = write_temp("bloch_trailing.off",
                                       "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                                       "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\nextra\n");
  CHECK(code_of([&] { load_mesh(trailing); }) == ErrorCode::parse_error);

  CHECK(code_of([] { load_mesh("/nonexistent/bloch_nope.off"); }) == ErrorCode::io_error);
}

TEST_CASE("open surfaces are rejected") {
  // tetrahedron minus one face
  const fs::path path = write_temp("bloch_open.off",
                                   "OFF\n4 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                                   "3 0 2 1\n3 0 1 3\n3 0 3 2\n");
  CHECK(code_of([&] { load_mesh(path); }) == ErrorCode::open_surface);
}

TEST_CASE("a single reversed face is flagged as inconsistent") {
  const fs::path path = write_temp("bloch_inconsistent.off",
                                   "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                                   "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 3 2\n");
  CHECK(code_of([&] { load_mesh(path); }) == ErrorCode::inconsistent_orientation);
}

TEST_CASE("globally inverted meshes are flagged and can be auto-flipped") {
  const fs::path path = write_temp("bloch_inverted.off",
                                   "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                                   "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n");
  CHECK(code_of([&] { load_mesh(path); }) == ErrorCode::inverted_orientation);
  const SurfaceMesh flipped = load_mesh(path, /*flip_inverted=*/true);
  CHECK(flipped.enclosed_volume > 0.0);
  CHECK(flipped.panel_count() == 4);
}

TEST_CASE("degenerate faces are rejected") {
  const fs::path path = write_temp("bloch_degenerate.off",
                                   "OFF\n4 4 0\n0 0 0\n1 0 0\n2 0 0\n0 0 1\n"
                                   "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  CHECK_THROWS_AS(load_mesh(path), Error);
}

TEST_CASE("linear maps rebuild the panel geometry") {
  const SurfaceMesh mesh = icosphere(1, 1.0);
  Eigen::Matrix3d stretch = Eigen::Matrix3d::Identity();
  stretch(0, 0) = 2.0;
  const SurfaceMesh spheroid = transformed(mesh, stretch, "spheroid");
  CHECK(spheroid.enclosed_volume == doctest::Approx(2.0 * mesh.enclosed_volume).epsilon(1e-12));
  CHECK(spheroid.label == "spheroid");

  // an orientation-reversing map keeps the surface outward-oriented
  const SurfaceMesh mirrored = transformed(mesh, -Eigen::Matrix3d::Identity());
  CHECK(mirrored.enclosed_volume == doctest::Approx(mesh.enclosed_volume).epsilon(1e-12));
}
