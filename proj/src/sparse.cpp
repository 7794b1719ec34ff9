#include "ngoncert/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace ngoncert {

SparseIntervalMatrix SparseIntervalMatrix::from_triplets(int dim, std::vector<Triplet> t) {
  SparseIntervalMatrix m;
  m.dim_ = dim;
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  m.rowptr_.assign(dim + 1, 0);
  std::size_t i = 0;
  for (int r = 0; r < dim; ++r) {
    while (i < t.size() && t[i].row == r) {
      int c = t[i].col;
      Interval acc = t[i].value;
      ++i;
      while (i < t.size() && t[i].row == r && t[i].col == c) {
        acc += t[i].value;
        ++i;
      }
      if (acc.lo() == 0.0 && acc.hi() == 0.0) continue;
      m.col_.push_back(c);
      m.val_.push_back(acc);
    }
    m.rowptr_[r + 1] = static_cast<int>(m.col_.size());
  }
  if (i != t.size()) throw std::invalid_argument("from_triplets: row index out of range");
  return m;
}

Interval SparseIntervalMatrix::coeff(int i, int j) const {
  for (int k = rowptr_[i]; k < rowptr_[i + 1]; ++k)
    if (col_[k] == j) return val_[k];
  return Interval();
}

IntervalVector SparseIntervalMatrix::matvec(const IntervalVector& x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("matvec: size");
  IntervalVector y(dim_);
  for (int r = 0; r < dim_; ++r) {
    Interval s;
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
    y[r] = s;
  }
  return y;
}

IntervalVector SparseIntervalMatrix::matvec(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("matvec: size");
  IntervalVector y(dim_);
  for (int r = 0; r < dim_; ++r) {
    Interval s;
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) s += val_[k] * Interval(x[col_[k]]);
    y[r] = s;
  }
  return y;
}

Interval SparseIntervalMatrix::quad_form(std::span<const double> x,
                                         std::span<const double> y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("quad_form: size");
  Interval s;
  for (int r = 0; r < dim_; ++r) {
    Interval row;
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) row += val_[k] * Interval(y[col_[k]]);
    s += Interval(x[r]) * row;
  }
  return s;
}

double SparseIntervalMatrix::inf_norm_upper() const {
  double best = 0.0;
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) s = rnd::add_up(s, val_[k].mag());
    best = std::max(best, s);
  }
  return best;
}

Eigen::SparseMatrix<double> SparseIntervalMatrix::midpoint() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(nnz());
  for (int r = 0; r < dim_; ++r)
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
      t.emplace_back(r, col_[k], val_[k].mid());
  Eigen::SparseMatrix<double> m(dim_, dim_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

bool SparseIntervalMatrix::structurally_symmetric() const {
  for (int r = 0; r < dim_; ++r)
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) {
      int c = col_[k];
      if (c == r) continue;
      bool found = false;
      for (int k2 = rowptr_[c]; k2 < rowptr_[c + 1]; ++k2)
        if (col_[k2] == r) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

SparseIntervalMatrix SparseIntervalMatrix::shifted(const SparseIntervalMatrix& A,
                                                   const Interval& s,
                                                   const SparseIntervalMatrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("shifted: dim mismatch");
  std::vector<Triplet> t;
  t.reserve(A.nnz() + B.nnz());
  for (int r = 0; r < A.dim(); ++r)
    for (int k = A.rowptr_[r]; k < A.rowptr_[r + 1]; ++k)
      t.push_back({r, A.col_[k], A.val_[k]});
  for (int r = 0; r < B.dim(); ++r)
    for (int k = B.rowptr_[r]; k < B.rowptr_[r + 1]; ++k)
      t.push_back({r, B.col_[k], -(s * B.val_[k])});
  return from_triplets(A.dim(), std::move(t));
}

std::string SparseIntervalMatrix::to_triplet_text(int sig) const {
  std::ostringstream os;
  os << dim_ << " " << dim_ << " " << nnz() << "\n";
  for (int r = 0; r < dim_; ++r)
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
      os << r << " " << col_[k] << " " << decimal_directed(val_[k].lo(), sig, true) << " "
         << decimal_directed(val_[k].hi(), sig, false) << "\n";
  return os.str();
}

namespace {

// Reverse Cuthill-McKee ordering, to keep the Cholesky envelope narrow.
std::vector<int> rcm_order(const SparseIntervalMatrix& A) {
  int n = A.dim();
  std::vector<std::vector<int>> adj(n);
  for (int r = 0; r < n; ++r)
    for (int k = A.rowptr()[r]; k < A.rowptr()[r + 1]; ++k) {
      int c = A.colidx()[k];
      if (c != r) adj[r].push_back(c);
    }
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) deg[i] = static_cast<int>(adj[i].size());
  for (auto& a : adj)
    std::sort(a.begin(), a.end(), [&](int x, int y) { return deg[x] < deg[y]; });

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      order.push_back(u);
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

} // namespace

// Positive definiteness of every symmetric matrix in the enclosure, via the
// floating Cholesky certificate: exact power-of-two equilibration, a shift
// delta, a floating envelope Cholesky of mid(A') - delta I, and the backward
// error bound lambda_min >= delta - gamma_{n+1} ||R||_1 ||R||_inf - ||rad||.
// The naive interval Cholesky would lose the race against the condition
// number on the nearly singular shifted pencils this is used for.
bool cholesky_spd_check(const SparseIntervalMatrix& A) {
  if (!A.structurally_symmetric())
    throw std::invalid_argument("cholesky_spd_check: pattern not symmetric");
  const int n = A.dim();
  if (n == 0) return true;

  // exact power-of-two scaling from the diagonal midpoints
  std::vector<double> scale(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double d = A.coeff(i, i).mid();
    if (!(d > 0.0)) return false;
    scale[i] = std::exp2(-std::round(0.5 * std::log2(d)));
  }

  std::vector<int> order = rcm_order(A);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;

  std::vector<int> first(n);
  for (int i = 0; i < n; ++i) first[i] = i;
  for (int r = 0; r < n; ++r)
    for (int k = A.rowptr()[r]; k < A.rowptr()[r + 1]; ++k) {
      int i = pos[r], j = pos[A.colidx()[k]];
      if (j < i) first[i] = std::min(first[i], j);
      if (i < j) first[j] = std::min(first[j], i);
    }

  std::vector<std::size_t> offset(n + 1, 0);
  for (int i = 0; i < n; ++i)
    offset[i + 1] = offset[i] + static_cast<std::size_t>(i - first[i] + 1);

  // scaled midpoint in the envelope (power-of-two products are exact) and an
  // upper bound of the infinity norm of the scaled radius
  std::vector<double> mid(offset[n], 0.0);
  std::vector<double> radrow(n, 0.0);
  auto mref = [&](int i, int j) -> double& { return mid[offset[i] + (j - first[i])]; };
  for (int r = 0; r < n; ++r)
    for (int k = A.rowptr()[r]; k < A.rowptr()[r + 1]; ++k) {
      int c = A.colidx()[k];
      const Interval v = A.values()[k];
      double s = scale[r] * scale[c];
      int i = pos[r], j = pos[c];
      if (j <= i) mref(i, j) = v.mid() * s;
      radrow[i] = rnd::add_up(radrow[i], rnd::mul_up(v.rad(), s));
    }
  double rad_norm = 0.0;
  for (double r : radrow) rad_norm = std::max(rad_norm, r);

  const double u = 0x1p-53;
  double gamma = (n + 1) * u / (1.0 - (n + 1) * u);
  gamma = rnd::next_up(rnd::next_up(gamma));

  std::vector<double> L(offset[n]);
  auto lref = [&](int i, int j) -> double& { return L[offset[i] + (j - first[i])]; };
  double delta = rnd::add_up(2.0 * rad_norm, 1e-300);

  for (int attempt = 0; attempt < 8; ++attempt) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = first[i]; j < i; ++j) {
        double s = mref(i, j);
        int k0 = std::max(first[i], first[j]);
        for (int k = k0; k < j; ++k) s -= lref(i, k) * lref(j, k);
        lref(i, j) = s / lref(j, j);
      }
      double s = mref(i, i) - delta;
      for (int k = first[i]; k < i; ++k) s -= lref(i, k) * lref(i, k);
      if (!(s > 0.0) || !std::isfinite(s)) {
        ok = false;
        break;
      }
      lref(i, i) = std::sqrt(s);
    }
    if (!ok) return false;

    // ||R||_1 and ||R||_inf of the computed factor (R = L^T)
    std::vector<double> colsum(n, 0.0);
    double linf = 0.0;
    for (int i = 0; i < n; ++i) {
      double rs = 0.0;
      for (int j = first[i]; j <= i; ++j) {
        double a = std::fabs(lref(i, j));
        rs = rnd::add_up(rs, a);
        colsum[j] = rnd::add_up(colsum[j], a);
      }
      linf = std::max(linf, rs); // row sums of L = column sums of R
    }
    double l1 = 0.0;
    for (double c : colsum) l1 = std::max(l1, c);
    double q = rnd::mul_up(gamma, rnd::mul_up(l1, linf));
    if (delta > rnd::add_up(q, rad_norm)) return true;
    delta = rnd::mul_up(2.0, rnd::add_up(q, rad_norm));
    if (!std::isfinite(delta)) return false;
  }
  return false;
}

} // namespace ngoncert
