#include "ngoncert/morley.hpp"

#include <map>
#include <stdexcept>

#include "ngoncert/constants.hpp"
#include "ngoncert/fp.hpp"

namespace ngoncert {

namespace {

int lat_index(int r, int c) { return r * (r + 1) / 2 + c; }

struct EdgeFrame {
  Interval len;
  Interval tx, ty; // unit tangent, lower to higher vertex index
  Interval nx, ny; // +90 degree rotation of the tangent
};

} // namespace

MorleySystem morley_assemble(const Interval& a, const Interval& b, int m, bool flip_normals) {
  if (!(b.lo() > 0.0)) throw std::domain_error("morley_assemble: need b > 0");
  if (m < 1) throw std::invalid_argument("morley_assemble: m >= 1");

  MorleySystem sys;
  sys.a = a;
  sys.b = b;
  sys.m = m;
  sys.n_vertices = (m + 1) * (m + 2) / 2;
  sys.corner_vertices = {lat_index(0, 0), lat_index(m, 0), lat_index(m, m)};

  // Edge direction classes: 0 along X2, 1 along X3, 2 along X3 - X2. All
  // lattice edges of a class share the same frame; lower lattice index is
  // always the tail, so no per-edge sign is needed.
  const Interval one(1.0);
  std::array<std::array<Interval, 2>, 3> dir = {{{one, Interval(0.0)},
                                                 {a, b},
                                                 {a - one, b}}};
  std::array<EdgeFrame, 3> frame;
  Interval hm = one / Interval(static_cast<double>(m));
  for (int c = 0; c < 3; ++c) {
    Interval len = sqrt(sq(dir[c][0]) + sq(dir[c][1])) * hm;
    EdgeFrame f;
    f.len = len;
    f.tx = dir[c][0] * hm / len;
    f.ty = dir[c][1] * hm / len;
    f.nx = -f.ty;
    f.ny = f.tx;
    if (flip_normals) {
      f.nx = -f.nx;
      f.ny = -f.ny;
    }
    frame[c] = f;
  }

  // global edge table
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<int> edge_class;
  auto get_edge = [&](int u, int v, int cls) {
    auto key = std::minmax(u, v);
    auto it = edge_id.find(key);
    if (it != edge_id.end()) return it->second;
    int id = static_cast<int>(sys.edges.size());
    edge_id.emplace(key, id);
    sys.edges.push_back({key.first, key.second});
    edge_class.push_back(cls);
    return id;
  };

  // P1 blocks of one sub-triangle: the stiffness block is scale invariant,
  // the mass block carries the area |T|/m^2 = b/(2 m^2).
  std::array<std::array<Interval, 2>, 3> g = {{{-one, (a - one) / b},
                                               {one, -a / b},
                                               {Interval(0.0), one / b}}};
  Interval area_T = b * Interval(0.5);
  std::array<std::array<std::array<Interval, 3>, 3>, 2> KT; // [class][i][j]
  std::array<std::array<Interval, 3>, 3> MT;
  // up sub-triangles are scaled translates of T; down ones are point
  // reflections with vertex correspondence (2, 0, 1)
  const std::array<int, 3> dperm = {2, 0, 1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      KT[0][i][j] = area_T * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
      MT[i][j] = area_T / (Interval(12.0) * Interval(static_cast<double>(m)) *
                           Interval(static_cast<double>(m)));
      if (i == j) MT[i][j] = MT[i][j] * Interval(2.0);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) KT[1][i][j] = KT[0][dperm[i]][dperm[j]];

  std::vector<SparseIntervalMatrix::Triplet> tk, tm;

  auto process_triangle = [&](const std::array<int, 3>& v, const std::array<int, 3>& ecls,
                              int cls) {
    // local edges opposite the usual ordering: (v0,v1), (v1,v2), (v2,v0)
    std::array<int, 3> eid;
    std::array<const EdgeFrame*, 3> ef;
    for (int e = 0; e < 3; ++e) {
      int u0 = v[e], u1 = v[(e + 1) % 3];
      eid[e] = get_edge(u0, u1, ecls[e]);
      ef[e] = &frame[ecls[e]];
    }
    // Gradient of a local quadratic at the midpoint of edge e, as a linear
    // function of the 6 local dofs (3 vertex values, 3 edge fluxes):
    // grad(m_e) = ((w_hi - w_lo)/len) t + psi_e n.
    // Then the affine gradient at vertex c: g(v_c) = g(m_ca) + g(m_cb) - g(m_ab).
    const int ndof = 6;
    // rows: gradient x/y at midpoints 0..2
    std::array<std::array<Interval, 6>, 3> mgx{}, mgy{};
    for (int e = 0; e < 3; ++e) {
      int u0 = v[e], u1 = v[(e + 1) % 3];
      int lo_slot = (u0 < u1) ? e : (e + 1) % 3;
      int hi_slot = (u0 < u1) ? (e + 1) % 3 : e;
      Interval inv_len = Interval(1.0) / ef[e]->len;
      mgx[e][hi_slot] += ef[e]->tx * inv_len;
      mgx[e][lo_slot] -= ef[e]->tx * inv_len;
      mgy[e][hi_slot] += ef[e]->ty * inv_len;
      mgy[e][lo_slot] -= ef[e]->ty * inv_len;
      mgx[e][3 + e] += ef[e]->nx;
      mgy[e][3 + e] += ef[e]->ny;
    }
    // vertex c is opposite edge (c+1): v_c = m_{c,c+1} + m_{c-1,c} - m_{c+1,c+2}
    std::array<std::array<Interval, 6>, 3> vgx{}, vgy{};
    for (int c = 0; c < 3; ++c) {
      int e_a = c;                // edge (c, c+1)
      int e_b = (c + 2) % 3;      // edge (c-1, c)
      int e_opp = (c + 1) % 3;    // edge (c+1, c+2)
      for (int d = 0; d < ndof; ++d) {
        vgx[c][d] = mgx[e_a][d] + mgx[e_b][d] - mgx[e_opp][d];
        vgy[c][d] = mgy[e_a][d] + mgy[e_b][d] - mgy[e_opp][d];
      }
    }
    // contributions: (vgx col_i)^T KT (vgx col_j) + same for y, and with MT
    std::array<int, 6> gdof = {v[0], v[1], v[2], sys.n_vertices + eid[0],
                               sys.n_vertices + eid[1], sys.n_vertices + eid[2]};
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < ndof; ++j) {
        Interval kk, mm;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) {
            kk += vgx[p][i] * KT[cls][p][q] * vgx[q][j] + vgy[p][i] * KT[cls][p][q] * vgy[q][j];
            mm += vgx[p][i] * MT[p][q] * vgx[q][j] + vgy[p][i] * MT[p][q] * vgy[q][j];
          }
        tk.push_back({gdof[i], gdof[j], kk});
        tm.push_back({gdof[i], gdof[j], mm});
      }
  };

  for (int r = 0; r < m; ++r) {
    for (int c = 0; c <= r; ++c) {
      // up triangle (r,c), (r+1,c), (r+1,c+1): edges along X2, X3-X2, X3
      process_triangle({lat_index(r, c), lat_index(r + 1, c), lat_index(r + 1, c + 1)},
                       {0, 2, 1}, 0);
    }
    for (int c = 0; c < r; ++c) {
      // down triangle (r,c), (r+1,c+1), (r,c+1): edges along X3, X2, X3-X2
      process_triangle({lat_index(r, c), lat_index(r + 1, c + 1), lat_index(r, c + 1)},
                       {1, 0, 2}, 1);
    }
  }

  sys.n_edges = static_cast<int>(sys.edges.size());
  int dof = sys.n_vertices + sys.n_edges;
  // triplets were pushed with final dof ids already
  sys.Kxx = SparseIntervalMatrix::from_triplets(dof, std::move(tk));
  sys.Mxx = SparseIntervalMatrix::from_triplets(dof, std::move(tm));
  return sys;
}

ReducedMorley reduce_corners(const MorleySystem& sys) {
  std::vector<char> drop(sys.dof(), 0);
  for (int cv : sys.corner_vertices) drop[cv] = 1;
  ReducedMorley out;
  std::vector<int> newid(sys.dof(), -1);
  for (int i = 0; i < sys.dof(); ++i)
    if (!drop[i]) {
      newid[i] = static_cast<int>(out.keep.size());
      out.keep.push_back(i);
    }
  auto reduce = [&](const SparseIntervalMatrix& A) {
    std::vector<SparseIntervalMatrix::Triplet> t;
    for (int r = 0; r < A.dim(); ++r) {
      if (newid[r] < 0) continue;
      for (int k = A.rowptr()[r]; k < A.rowptr()[r + 1]; ++k) {
        int c = A.colidx()[k];
        if (newid[c] < 0) continue;
        t.push_back({newid[r], newid[c], A.values()[k]});
      }
    }
    return SparseIntervalMatrix::from_triplets(static_cast<int>(out.keep.size()), std::move(t));
  };
  out.Kxx0 = reduce(sys.Kxx);
  out.Mxx0 = reduce(sys.Mxx);
  return out;
}

MorleyCertification certify_interp_constant(const Interval& a, const Interval& b, int m,
                                            double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("certify_interp_constant: eps > 0");
  if (m < 2) throw std::invalid_argument("certify_interp_constant: m >= 2");
  MorleySystem sys = morley_assemble(a, b, m);
  ReducedMorley red = reduce_corners(sys);

  MorleyCertification out;
  auto fp = fp_eigs(red.Kxx0.midpoint(), red.Mxx0.midpoint(), 1, 1e-10);
  out.rho_float = fp.values(0);

  double shift = out.rho_float - eps;
  if (!(shift > 0.0)) return out;
  SparseIntervalMatrix S =
      SparseIntervalMatrix::shifted(red.Kxx0, Interval(shift), red.Mxx0);
  if (!cholesky_spd_check(S)) return out;

  // C^(m)(T) <= 1/sqrt(shift); C(T) <= sqrt(m^2/(m^2-1)) C^(m)(T)
  Interval mm(static_cast<double>(m));
  Interval pref = sqrt(sq(mm) / (sq(mm) - Interval(1.0)));
  Interval bound = pref / sqrt(Interval(shift));
  out.certified = true;
  out.bound = Interval(0.0, bound.hi());
  return out;
}

MorleyCertification certify_interp_constant_ngon(int n, int m, double eps) {
  ThetaTrig t = enclose_theta(n);
  return certify_interp_constant(t.cos_t, t.sin_t, m, eps);
}

} // namespace ngoncert
