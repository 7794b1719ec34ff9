#include "ngoncert/mesh.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ngoncert {

namespace {

void append_band_triangles(std::vector<TriangleRef>& out, int m, int slice,
                           const std::function<int(int, int)>& id) {
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c <= r; ++c)
      out.push_back({{id(r, c), id(r + 1, c), id(r + 1, c + 1)}, false, slice});
    for (int c = 0; c < r; ++c)
      out.push_back({{id(r, c), id(r + 1, c + 1), id(r, c + 1)}, true, slice});
  }
}

} // namespace

SliceMesh::SliceMesh(int n_, int m_) : n(n_), m(m_) {
  if (n < 5 || m < 1) throw std::invalid_argument("SliceMesh: need n >= 5, m >= 1");
  triangles.reserve(static_cast<std::size_t>(m) * m);
  append_band_triangles(triangles, m, 0, [](int r, int c) { return node_index(r, c); });
}

std::array<int, 2> SliceMesh::node_rc(int idx) const {
  int r = static_cast<int>((std::sqrt(8.0 * idx + 1.0) - 1.0) / 2.0);
  while (node_index(r + 1, 0) <= idx) ++r;
  while (node_index(r, 0) > idx) --r;
  return {r, idx - node_index(r, 0)};
}

SymmetricMesh::SymmetricMesh(int n_, int m_) : n(n_), m(m_) {
  if (n < 5 || m < 1) throw std::invalid_argument("SymmetricMesh: need n >= 5, m >= 1");
  owned_per_slice = m * (m + 1) / 2;
  node_count = 1 + static_cast<std::int64_t>(n) * owned_per_slice;

  node_src.resize(node_count);
  node_src[0] = {0, 0, 0};
  for (int j = 0; j < n; ++j)
    for (int r = 1; r <= m; ++r)
      for (int c = 0; c < r; ++c)
        node_src[node_id(j, r, c)] = {j, r, c};

  interior_index.assign(node_count, -1);
  int next = 0;
  for (std::int64_t i = 0; i < node_count; ++i)
    if (!is_boundary(static_cast<int>(i))) interior_index[i] = next++;
  interior_count = next;

  triangles.reserve(static_cast<std::size_t>(n) * m * m);
  for (int j = 0; j < n; ++j)
    append_band_triangles(triangles, m, j, [this, j](int r, int c) { return node_id(j, r, c); });
}

int SymmetricMesh::node_id(int slice, int r, int c) const {
  if (r == 0) return 0;
  if (c == r) {
    slice = (slice + 1) % n;
    c = 0;
  }
  return 1 + slice * owned_per_slice + r * (r - 1) / 2 + c;
}

std::vector<int> SymmetricMesh::rotation_permutation(int k) const {
  if (k < 0 || k >= n) throw std::invalid_argument("rotation_permutation: 0 <= k < n");
  std::vector<int> p(node_count);
  p[0] = 0;
  for (std::int64_t i = 1; i < node_count; ++i) {
    auto [j, r, c] = std::tuple{node_src[i][0], node_src[i][1], node_src[i][2]};
    p[i] = node_id((j + k) % n, r, c);
  }
  return p;
}

std::vector<int> SymmetricMesh::reflection_permutation() const {
  std::vector<int> p(node_count);
  p[0] = 0;
  for (std::int64_t i = 1; i < node_count; ++i) {
    auto [j, r, c] = std::tuple{node_src[i][0], node_src[i][1], node_src[i][2]};
    // (j, r, c) -> slice n-1-j with c' = r - c
    p[i] = node_id(((n - 1 - j) % n + n) % n, r, r - c);
  }
  return p;
}

std::vector<int> SymmetricMesh::interior_permutation(const std::vector<int>& node_perm) const {
  std::vector<int> p(interior_count, -1);
  for (std::int64_t i = 0; i < node_count; ++i) {
    int a = interior_index[i];
    if (a < 0) continue;
    int b = interior_index[node_perm[i]];
    if (b < 0) throw std::logic_error("interior_permutation: boundary image");
    p[a] = b;
  }
  return p;
}

std::array<Interval, 2> SymmetricMesh::coordinate(
    int id, const ThetaTrig&, const std::vector<std::array<Interval, 2>>& rays) const {
  auto [j, r, c] = std::tuple{node_src[id][0], node_src[id][1], node_src[id][2]};
  if (r == 0) return {Interval(0.0), Interval(0.0)};
  Interval h = Interval(1.0) / Interval(static_cast<double>(m));
  // position = (r-c) h e_j + c h e_{j+1}, e_j = (cos j theta, sin j theta)
  const auto& ej = rays[j];
  const auto& ej1 = rays[(j + 1) % n];
  Interval a = Interval(static_cast<double>(r - c)) * h;
  Interval b = Interval(static_cast<double>(c)) * h;
  return {a * ej[0] + b * ej1[0], a * ej[1] + b * ej1[1]};
}

std::array<double, 2> SymmetricMesh::coordinate_mid(int id) const {
  auto [j, r, c] = std::tuple{node_src[id][0], node_src[id][1], node_src[id][2]};
  double h = 1.0 / m;
  double t0 = 2.0 * M_PI * j / n, t1 = 2.0 * M_PI * (j + 1) / n;
  double a = (r - c) * h, b = c * h;
  return {a * std::cos(t0) + b * std::cos(t1), a * std::sin(t0) + b * std::sin(t1)};
}

std::string SymmetricMesh::to_csv() const {
  std::ostringstream os;
  os << "type,index,a,b,c,d\n";
  for (std::int64_t i = 0; i < node_count; ++i) {
    auto xy = coordinate_mid(static_cast<int>(i));
    os << "v," << i << "," << xy[0] << "," << xy[1] << "," << (is_boundary(i) ? 1 : 0) << ",\n";
  }
  for (std::size_t t = 0; t < triangles.size(); ++t)
    os << "t," << t << "," << triangles[t].v[0] << "," << triangles[t].v[1] << ","
       << triangles[t].v[2] << "," << triangles[t].slice << "\n";
  return os.str();
}

IntervalVector extend_slice_to_full(const SymmetricMesh& mesh, const IntervalVector& slice_values) {
  int expected = (mesh.m + 1) * (mesh.m + 2) / 2;
  if (static_cast<int>(slice_values.size()) != expected)
    throw std::invalid_argument("extend_slice_to_full: size mismatch");
  IntervalVector out(mesh.node_count);
  out[0] = slice_values[SliceMesh::node_index(0, 0)];
  for (int j = 0; j < mesh.n; ++j)
    for (int r = 1; r <= mesh.m; ++r)
      for (int c = 0; c < r; ++c)
        out[mesh.node_id(j, r, c)] = slice_values[SliceMesh::node_index(r, c)];
  return out;
}

int slice_interior_dof(int m) { return 1 + m * (m - 1) / 2; }

int slice_interior_index(int r, int c, int m) {
  if (r == 0) return 0;
  if (c == r) c = 0; // ray identification
  if (r >= m) return -1;
  return 1 + r * (r - 1) / 2 + c;
}

std::vector<double> extend_slice_interior(const SymmetricMesh& mesh,
                                          const std::vector<double>& slice_interior) {
  if (static_cast<int>(slice_interior.size()) != slice_interior_dof(mesh.m))
    throw std::invalid_argument("extend_slice_interior: size mismatch");
  std::vector<double> out(mesh.interior_count, 0.0);
  out[mesh.interior_index[0]] = slice_interior[0];
  for (int j = 0; j < mesh.n; ++j)
    for (int r = 1; r < mesh.m; ++r)
      for (int c = 0; c < r; ++c) {
        int id = mesh.node_id(j, r, c);
        out[mesh.interior_index[id]] = slice_interior[slice_interior_index(r, c, mesh.m)];
      }
  return out;
}

} // namespace ngoncert
