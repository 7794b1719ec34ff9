#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ngoncert/constants.hpp"
#include "ngoncert/interval.hpp"

namespace ngoncert {

/// One triangle of the lattice; vertex order fixes the local basis-gradient
/// table (see assembly): upward triangles are translates of the reference
/// slice triangle scaled by h, downward ones their point reflections.
struct TriangleRef {
  std::array<int, 3> v;
  bool down;
  int slice;
};

/// Triangulation of the closed slice {r*(cos a, sin a) : 0<=r<=1, a in [0, theta]}
/// into m^2 congruent triangles. Nodes are lattice points (r, c), 0 <= c <= r <= m,
/// at position (r-c)/m * a0 + c/m * a1; the apex (center of the polygon) is node 0.
struct SliceMesh {
  int n = 0, m = 0;
  std::vector<TriangleRef> triangles; // m^2 entries, slice = 0
  SliceMesh(int n, int m);

  int node_count() const { return (m + 1) * (m + 2) / 2; }
  static int node_index(int r, int c) { return r * (r + 1) / 2 + c; }
  std::array<int, 2> node_rc(int idx) const;
  bool on_outer_boundary(int idx) const { return node_rc(idx)[0] == m; }
  /// Nodes on the ray [o, a0] are exactly those with c == 0.
  bool on_ray0(int idx) const { return node_rc(idx)[1] == 0; }
};

/// Dihedrally symmetric triangulation of the regular n-gon inscribed in the
/// unit circle with a vertex at (1,0). Node ids: 0 is the center; slice j owns
/// the lattice nodes (r, c) with 1 <= r <= m, 0 <= c < r; the nodes on ray
/// S_{j+1} (c == r) belong to slice j+1 as its (r, 0).
struct SymmetricMesh {
  int n = 0, m = 0;
  std::int64_t node_count = 0;       // N = 1 + n m (m+1) / 2
  int owned_per_slice = 0;           // m(m+1)/2
  int interior_count = 0;            // N0
  std::vector<TriangleRef> triangles; // n*m^2, grouped by slice
  std::vector<int> interior_index;   // node id -> row of K0/M0, -1 on boundary
  std::vector<std::array<int, 3>> node_src; // node id -> (slice, r, c), owned coords

  SymmetricMesh(int n, int m);

  int node_id(int slice, int r, int c) const;
  bool is_boundary(int id) const { return node_src[id][1] == m; }

  /// Permutation p with p[i] = image of node i under rotation by k*theta.
  std::vector<int> rotation_permutation(int k) const;
  /// Node permutation of the reflection y -> -y.
  std::vector<int> reflection_permutation() const;
  /// Interior-row permutation induced by a node permutation.
  std::vector<int> interior_permutation(const std::vector<int>& node_perm) const;

  /// Interval coordinates of a node (exact lattice combination of the unit
  /// ray directions evaluated in interval arithmetic).
  std::array<Interval, 2> coordinate(int id, const ThetaTrig& trig,
                                     const std::vector<std::array<Interval, 2>>& rays) const;
  /// Floating coordinates via libm trig (reporting / oracle use only).
  std::array<double, 2> coordinate_mid(int id) const;

  /// CSV export: node lines "v,id,x,y", triangle lines "t,idx,v0,v1,v2,slice".
  std::string to_csv() const;
};

/// Extend nodal values given on the slice lattice to the full mesh by the
/// dihedral symmetry. Input indexed per SliceMesh::node_index; values on the
/// two rays must agree ((r,0) vs (r,r)) for the result to restrict back.
IntervalVector extend_slice_to_full(const SymmetricMesh& mesh, const IntervalVector& slice_values);

/// Same extension on interior vectors: slice quotient dof -> full interior dof.
/// Quotient indexing: 0 = center, then (r, c), 1 <= r <= m-1, 0 <= c < r.
std::vector<double> extend_slice_interior(const SymmetricMesh& mesh,
                                          const std::vector<double>& slice_interior);
int slice_interior_dof(int m);
int slice_interior_index(int r, int c, int m); // -1 for boundary/out of range

} // namespace ngoncert
