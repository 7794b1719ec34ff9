#pragma once

#include <span>
#include <tuple>
#include <vector>

#include <Eigen/SparseCore>

#include "ngoncert/interval.hpp"

namespace ngoncert {

/// Symmetric-aware sparse matrix with interval entries, CSR storage.
/// Entries that are exactly [0,0] are dropped at construction.
class SparseIntervalMatrix {
public:
  struct Triplet {
    int row, col;
    Interval value;
  };

  SparseIntervalMatrix() = default;
  static SparseIntervalMatrix from_triplets(int dim, std::vector<Triplet> triplets);

  int dim() const { return dim_; }
  std::size_t nnz() const { return col_.size(); }

  /// Entry (i,j); [0,0] when structurally absent.
  Interval coeff(int i, int j) const;

  /// y = A x for an interval vector x.
  IntervalVector matvec(const IntervalVector& x) const;
  /// y = A x for a point vector x (tight enclosures).
  IntervalVector matvec(std::span<const double> x) const;
  /// Enclosure of x^T A y, point vectors.
  Interval quad_form(std::span<const double> x, std::span<const double> y) const;
  /// Upper bound for the infinity norm (max row abs sum).
  double inf_norm_upper() const;

  /// Midpoint matrix for floating-point solvers.
  Eigen::SparseMatrix<double> midpoint() const;

  bool structurally_symmetric() const;

  /// Row access for algorithms: [rowptr[i], rowptr[i+1]) indexes col/val.
  const std::vector<int>& rowptr() const { return rowptr_; }
  const std::vector<int>& colidx() const { return col_; }
  const std::vector<Interval>& values() const { return val_; }

  /// A - s*B entrywise on the union pattern.
  static SparseIntervalMatrix shifted(const SparseIntervalMatrix& A,
                                      const Interval& s,
                                      const SparseIntervalMatrix& B);

  /// Coordinate-triplet text dump with outward-rounded decimal endpoints.
  std::string to_triplet_text(int sig = 17) const;

private:
  int dim_ = 0;
  std::vector<int> rowptr_{0};
  std::vector<int> col_;
  std::vector<Interval> val_;
};

/// True only if every symmetric matrix within the interval enclosure is
/// positive definite (interval Cholesky completes with strictly positive
/// pivots). False means "not proven", never "proven indefinite".
bool cholesky_spd_check(const SparseIntervalMatrix& A);

} // namespace ngoncert
