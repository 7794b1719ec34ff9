#include "ngoncert/assembly.hpp"

#include <stdexcept>

namespace ngoncert {

std::array<std::array<Interval, 2>, 3> element_gradients(const ThetaTrig& trig) {
  Interval cot = trig.cos_t / trig.sin_t;
  return {{{Interval(-1.0), -trig.tan_half_t},
           {Interval(1.0), -cot},
           {Interval(0.0), Interval(1.0) / trig.sin_t}}};
}

ElementBlocks element_blocks(const ThetaTrig& trig, int n, int m) {
  ElementBlocks b;
  b.n = n;
  b.m = m;
  b.trig = trig;
  b.h = Interval(1.0) / Interval(static_cast<double>(m));
  b.area = Interval(0.5) * sq(b.h) * trig.sin_t;
  b.cot = trig.cos_t / trig.sin_t;

  auto up = element_gradients(trig);
  // Down triangles are point reflections; vertex slots (v1,v2,v3) of
  // (n(r,c), n(r+1,c+1), n(r,c+1)) carry -g_k, -g_i, -g_j.
  std::array<std::array<Interval, 2>, 3> down = {
      {{-up[2][0], -up[2][1]}, {-up[0][0], -up[0][1]}, {-up[1][0], -up[1][1]}}};
  b.grad = {up, down};

  Interval half_s = Interval(0.5) * trig.sin_t;
  for (int cls = 0; cls < 2; ++cls)
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        b.K[cls][a][c] =
            half_s * (b.grad[cls][a][0] * b.grad[cls][c][0] + b.grad[cls][a][1] * b.grad[cls][c][1]);

  Interval tw = b.area / Interval(12.0);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) b.M[a][c] = (a == c) ? tw * Interval(2.0) : tw;

  auto rays = trig_multiples(trig, n);
  b.pair.resize(n);
  for (int j = 0; j < n; ++j) {
    const Interval& cj = rays[j][0];
    const Interval& sj = rays[j][1];
    for (int cls = 0; cls < 2; ++cls) {
      // global gradients G = R(j*theta) g
      std::array<std::array<Interval, 2>, 3> g;
      for (int a = 0; a < 3; ++a) {
        g[a][0] = cj * b.grad[cls][a][0] - sj * b.grad[cls][a][1];
        g[a][1] = sj * b.grad[cls][a][0] + cj * b.grad[cls][a][1];
      }
      for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
          for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c)
              b.pair[j][cls][2 * alpha + beta][a][c] = half_s * (g[a][alpha] * g[c][beta]);
    }
  }
  return b;
}

namespace {

MassBounds mass_bounds_from(const Interval& area, int mult_min, int mult_max) {
  Interval lo = Interval(static_cast<double>(mult_min)) * area / Interval(12.0);
  Interval hi = Interval(static_cast<double>(mult_max)) * area / Interval(3.0);
  return {lo.lo(), hi.hi()};
}

} // namespace

AssembledSystem assemble_system(const SymmetricMesh& mesh, const ThetaTrig& trig) {
  if (trig.n != mesh.n) throw std::invalid_argument("assemble_system: trig/mesh mismatch");
  ElementBlocks b = element_blocks(trig, mesh.n, mesh.m);

  AssembledSystem sys;
  sys.n = mesh.n;
  sys.m = mesh.m;
  sys.dof = mesh.interior_count;
  sys.h = b.h;
  sys.area_h = b.area;
  sys.mass_bounds = mass_bounds_from(b.area, std::min(mesh.n, 6), std::max(mesh.n, 6));

  std::vector<SparseIntervalMatrix::Triplet> tk, tm;
  tk.reserve(mesh.triangles.size() * 9);
  tm.reserve(mesh.triangles.size() * 9);
  for (const auto& tri : mesh.triangles) {
    int cls = tri.down ? 1 : 0;
    int idx[3];
    for (int a = 0; a < 3; ++a) idx[a] = mesh.interior_index[tri.v[a]];
    for (int a = 0; a < 3; ++a) {
      if (idx[a] < 0) continue;
      for (int c = 0; c < 3; ++c) {
        if (idx[c] < 0) continue;
        tk.push_back({idx[a], idx[c], b.K[cls][a][c]});
        tm.push_back({idx[a], idx[c], b.M[a][c]});
      }
    }
  }
  sys.K0 = SparseIntervalMatrix::from_triplets(sys.dof, std::move(tk));
  sys.M0 = SparseIntervalMatrix::from_triplets(sys.dof, std::move(tm));
  return sys;
}

SliceSystem assemble_slice_system(int n, int m, const ThetaTrig& trig) {
  if (trig.n != n) throw std::invalid_argument("assemble_slice_system: trig mismatch");
  ElementBlocks b = element_blocks(trig, n, m);
  SliceMesh slice(n, m);

  SliceSystem sys;
  sys.n = n;
  sys.m = m;
  sys.dof = slice_interior_dof(m);
  sys.h = b.h;
  sys.area_h = b.area;
  sys.mass_bounds = mass_bounds_from(b.area, 1, 6);

  std::vector<SparseIntervalMatrix::Triplet> tk, tm;
  tk.reserve(slice.triangles.size() * 9);
  tm.reserve(slice.triangles.size() * 9);
  for (const auto& tri : slice.triangles) {
    int cls = tri.down ? 1 : 0;
    int idx[3];
    for (int a = 0; a < 3; ++a) {
      auto rc = slice.node_rc(tri.v[a]);
      idx[a] = slice_interior_index(rc[0], rc[1], m);
    }
    for (int a = 0; a < 3; ++a) {
      if (idx[a] < 0) continue;
      for (int c = 0; c < 3; ++c) {
        if (idx[c] < 0) continue;
        tk.push_back({idx[a], idx[c], b.K[cls][a][c]});
        tm.push_back({idx[a], idx[c], b.M[a][c]});
      }
    }
  }
  sys.K = SparseIntervalMatrix::from_triplets(sys.dof, std::move(tk));
  sys.M = SparseIntervalMatrix::from_triplets(sys.dof, std::move(tm));
  return sys;
}

PartialBlocks assemble_partials(const SymmetricMesh& mesh, const ElementBlocks& b) {
  PartialBlocks out;
  const int n = mesh.n, m = mesh.m;
  std::vector<SparseIntervalMatrix::Triplet> txx, tyy, txyp, txym;

  auto accumulate = [&](int slice, bool minus_slice) {
    for (int t = slice * m * m; t < (slice + 1) * m * m; ++t) {
      const auto& tri = mesh.triangles[t];
      int cls = tri.down ? 1 : 0;
      int idx[3];
      for (int a = 0; a < 3; ++a) idx[a] = mesh.interior_index[tri.v[a]];
      const auto& P = b.pair[slice][cls];
      for (int a = 0; a < 3; ++a) {
        if (idx[a] < 0) continue;
        for (int c = 0; c < 3; ++c) {
          if (idx[c] < 0) continue;
          txx.push_back({idx[a], idx[c], P[0][a][c]});
          Interval yy = P[3][a][c];
          tyy.push_back({idx[a], idx[c], minus_slice ? -yy : yy});
          Interval xy = P[1][a][c] + P[2][a][c]; // symmetrized mixed pairing
          if (minus_slice)
            txym.push_back({idx[a], idx[c], xy});
          else
            txyp.push_back({idx[a], idx[c], xy});
        }
      }
    }
  };
  accumulate(0, false);
  accumulate(n - 1, true);

  int dof = mesh.interior_count;
  out.Kxx = SparseIntervalMatrix::from_triplets(dof, std::move(txx));
  out.Kyy = SparseIntervalMatrix::from_triplets(dof, std::move(tyy));
  out.Kxy_plus = SparseIntervalMatrix::from_triplets(dof, std::move(txyp));
  out.Kxy_minus = SparseIntervalMatrix::from_triplets(dof, std::move(txym));
  return out;
}

namespace {

template <typename Block>
Interval stream_form(const SymmetricMesh& mesh, int j, int m, std::span<const double> x,
                     std::span<const double> y, Block&& block) {
  Interval acc;
  for (int t = j * m * m; t < (j + 1) * m * m; ++t) {
    const auto& tri = mesh.triangles[t];
    int cls = tri.down ? 1 : 0;
    double xv[3], yv[3];
    bool any = false;
    for (int a = 0; a < 3; ++a) {
      int id = mesh.interior_index[tri.v[a]];
      xv[a] = id < 0 ? 0.0 : x[id];
      yv[a] = id < 0 ? 0.0 : y[id];
      any = any || xv[a] != 0.0 || yv[a] != 0.0;
    }
    if (!any) continue;
    for (int a = 0; a < 3; ++a) {
      if (xv[a] == 0.0) continue;
      Interval row;
      for (int c = 0; c < 3; ++c) {
        if (yv[c] == 0.0) continue;
        row += block(cls, a, c) * Interval(yv[c]);
      }
      acc += Interval(xv[a]) * row;
    }
  }
  return acc;
}

} // namespace

Interval slice_pairing(const SymmetricMesh& mesh, const ElementBlocks& b, int j, int alpha,
                       int beta, std::span<const double> x, std::span<const double> y) {
  return stream_form(mesh, j, b.m, x, y, [&](int cls, int a, int c) {
    return b.pair[j][cls][2 * alpha + beta][a][c];
  });
}

Interval slice_dirichlet(const SymmetricMesh& mesh, const ElementBlocks& b, int j,
                         std::span<const double> x, std::span<const double> y) {
  return stream_form(mesh, j, b.m, x, y,
                     [&](int cls, int a, int c) { return b.K[cls][a][c]; });
}

Interval slice_mass(const SymmetricMesh& mesh, const ElementBlocks& b, int j,
                    std::span<const double> x, std::span<const double> y) {
  return stream_form(mesh, j, b.m, x, y, [&](int, int a, int c) { return b.M[a][c]; });
}

std::pair<IntervalVector, IntervalVector> assemble_rhs_material(
    const AssembledSystem& sys, const PartialBlocks& blocks, const IntervalVector& u1,
    const Interval& lam1) {
  if (static_cast<int>(u1.size()) != sys.dof)
    throw std::invalid_argument("assemble_rhs_material: dimension mismatch");
  ThetaTrig trig = enclose_theta(sys.n);
  Interval cot = trig.cos_t / trig.sin_t;

  IntervalVector kxx = blocks.Kxx.matvec(u1);
  IntervalVector kyy = blocks.Kyy.matvec(u1);
  IntervalVector kxyp = blocks.Kxy_plus.matvec(u1);
  IntervalVector kxym = blocks.Kxy_minus.matvec(u1);
  IntervalVector mu = sys.M0.matvec(u1);

  Interval two_lam_over_n = Interval(2.0) * lam1 / Interval(static_cast<double>(sys.n));
  IntervalVector f1(sys.dof), f2(sys.dof);
  for (int i = 0; i < sys.dof; ++i) {
    f1[i] = Interval(2.0) * kxx[i] - cot * (kxyp[i] - kxym[i]) - two_lam_over_n * mu[i];
    f2[i] = -(Interval(2.0) * cot) * kyy[i] + (kxyp[i] + kxym[i]);
  }
  return {std::move(f1), std::move(f2)};
}

} // namespace ngoncert
