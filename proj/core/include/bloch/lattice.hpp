#pragma once

#include <vector>

#include "bloch/types.hpp"

namespace bloch {

/// Direct and reciprocal bases of a 3D Bravais lattice, l_i . b_j = 2 pi delta_ij.
struct LatticeSpec {
  Vec3 l1, l2, l3;
  Vec3 b1, b2, b3;
  double cell_volume = 0.0;

  const Vec3& edge(int i) const;
  const Vec3& dual(int j) const;

  /// Cartesian reciprocal point m1 b1 + m2 b2 + m3 b3.
  Vec3 reciprocal_point(const IntTriple& m) const;

  /// Simple cubic lattice with the given edge length.
  static LatticeSpec cubic(double edge);
};

/// Builds the reciprocal basis from three independent cell edges.
/// Throws ErrorCode::degenerate_lattice when the edges are (nearly) coplanar.
LatticeSpec reciprocal_basis(const Vec3& l1, const Vec3& l2, const Vec3& l3);

struct ExceptionalMember {
  IntTriple index;  // coefficients in the reciprocal basis
  Vec3 point;       // Cartesian reciprocal-lattice vector
};

/// A Bloch vector together with every reciprocal point m satisfying
/// |k - m| = |k|, detected through the equivalent plane condition
/// 2 k.m = |m|^2 at relative tolerance tol (relative to |k|^2).
/// members[0] is always the zero vector; order == members.size().
struct ExceptionalSet {
  Vec3 k;
  std::vector<ExceptionalMember> members;
  int order = 1;
  double tol = 0.0;
};

ExceptionalSet find_exceptional_set(const Vec3& k, const LatticeSpec& lattice, double tol = 1e-9);

struct PlaneDistance {
  IntTriple index;
  double distance;  // |2 k.m - |m|^2| / (2 |m|)
};

/// Distances from k to the Bragg planes of all nonzero m with |m| <= radius,
/// sorted ascending. Scan diagnostics for spotting exceptional crossings.
std::vector<PlaneDistance> plane_distances(const Vec3& k, const LatticeSpec& lattice,
                                           double radius);

}  // namespace bloch
