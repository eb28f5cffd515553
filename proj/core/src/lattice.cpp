#include "bloch/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bloch/errors.hpp"

namespace bloch {

const Vec3& LatticeSpec::edge(int i) const {
  switch (i) {
    case 0: return l1;
    case 1: return l2;
    case 2: return l3;
  }
  throw Error(ErrorCode::invalid_argument, "edge index must be 0, 1 or 2");
}

const Vec3& LatticeSpec::dual(int j) const {
  switch (j) {
    case 0: return b1;
    case 1: return b2;
    case 2: return b3;
  }
  throw Error(ErrorCode::invalid_argument, "dual index must be 0, 1 or 2");
}

Vec3 LatticeSpec::reciprocal_point(const IntTriple& m) const {
  return m[0] * b1 + m[1] * b2 + m[2] * b3;
}

LatticeSpec LatticeSpec::cubic(double edge) {
  return reciprocal_basis(Vec3(edge, 0, 0), Vec3(0, edge, 0), Vec3(0, 0, edge));
}

LatticeSpec reciprocal_basis(const Vec3& l1, const Vec3& l2, const Vec3& l3) {
  const Vec3 c23 = l2.cross(l3);
  const Vec3 c31 = l3.cross(l1);
  const Vec3 c12 = l1.cross(l2);
  const double det = l1.dot(c23);
  const double scale = l1.norm() * l2.norm() * l3.norm();
  if (std::abs(det) <= 1e-12 * scale) {
    throw Error(ErrorCode::degenerate_lattice, "cell edges are (nearly) linearly dependent");
  }
  LatticeSpec spec;
  spec.l1 = l1;
  spec.l2 = l2;
  spec.l3 = l3;
  // scaled-cofactor form; exact for axis-aligned cells
  spec.b1 = (two_pi * c23) / det;
  spec.b2 = (two_pi * c31) / det;
  spec.b3 = (two_pi * c12) / det;
  spec.cell_volume = std::abs(det);
  return spec;
}

namespace {

// Integer bounds covering the Cartesian ball |m| <= radius: from the
// biorthogonality, m_i = m . l_i / (2 pi), hence |m_i| <= radius |l_i| / (2 pi).
std::array<int, 3> box_bounds(const LatticeSpec& lattice, double radius) {
  std::array<int, 3> n{};
  for (int i = 0; i < 3; ++i) {
    n[i] = static_cast<int>(std::floor(radius * lattice.edge(i).norm() / two_pi * (1 + 1e-14)));
  }
  return n;
}

bool triple_less(const IntTriple& a, const IntTriple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ExceptionalSet find_exceptional_set(const Vec3& k, const LatticeSpec& lattice, double tol) {
  if (k.norm() == 0.0) {
    throw Error(ErrorCode::zero_bloch_vector, "exceptional classification needs |k| > 0");
  }
  if (tol < 0.0 || tol >= 0.5) {
    throw Error(ErrorCode::invalid_argument, "tol must lie in [0, 0.5)");
  }
  const double k2 = k.squaredNorm();
  const double radius = 2.0 * k.norm() * (1.0 + tol);
  const auto bounds = box_bounds(lattice, radius);

  std::vector<ExceptionalMember> found;
  for (int m1 = -bounds[0]; m1 <= bounds[0]; ++m1) {
    for (int m2 = -bounds[1]; m2 <= bounds[1]; ++m2) {
      for (int m3 = -bounds[2]; m3 <= bounds[2]; ++m3) {
        if (m1 == 0 && m2 == 0 && m3 == 0) continue;
        const IntTriple idx{m1, m2, m3};
        const Vec3 m = lattice.reciprocal_point(idx);
        if (std::abs(2.0 * k.dot(m) - m.squaredNorm()) <= tol * k2) {
          found.push_back({idx, m});
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const ExceptionalMember& a, const ExceptionalMember& b) {
    const double na = a.point.squaredNorm();
    const double nb = b.point.squaredNorm();
    if (na != nb) return na < nb;
    return triple_less(a.index, b.index);
  });

  ExceptionalSet set;
  set.k = k;
  set.tol = tol;
  set.members.push_back({IntTriple{0, 0, 0}, Vec3::Zero()});
  set.members.insert(set.members.end(), found.begin(), found.end());
  set.order = static_cast<int>(set.members.size());
  return set;
}

std::vector<PlaneDistance> plane_distances(const Vec3& k, const LatticeSpec& lattice,
                                           double radius) {
  if (radius <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "radius must be positive");
  }
  const auto bounds = box_bounds(lattice, radius);
  std::vector<PlaneDistance> planes;
  for (int m1 = -bounds[0]; m1 <= bounds[0]; ++m1) {
    for (int m2 = -bounds[1]; m2 <= bounds[1]; ++m2) {
      for (int m3 = -bounds[2]; m3 <= bounds[2]; ++m3) {
        if (m1 == 0 && m2 == 0 && m3 == 0) continue;
        const IntTriple idx{m1, m2, m3};
        const Vec3 m = lattice.reciprocal_point(idx);
        const double norm = m.norm();
        if (norm > radius * (1 + 1e-14)) continue;
        planes.push_back({idx, std::abs(2.0 * k.dot(m) - m.squaredNorm()) / (2.0 * norm)});
      }
    }
  }
  std::sort(planes.begin(), planes.end(), [&](const PlaneDistance& a, const PlaneDistance& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    const double na = lattice.reciprocal_point(a.index).squaredNorm();
    const double nb = lattice.reciprocal_point(b.index).squaredNorm();
    if (na != nb) return na < nb;
    return triple_less(a.index, b.index);
  });
  return planes;
}

}  // namespace bloch
