#include "doctest.h"

#include <cmath>
#include <random>

#include "ngoncert/fp.hpp"
#include "ngoncert/vlinalg.hpp"
#include "oracles.hpp"

using namespace ngoncert;

namespace {

SparseIntervalMatrix from_dense(const Eigen::MatrixXd& A) {
  std::vector<SparseIntervalMatrix::Triplet> t;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0.0) t.push_back({i, j, Interval(A(i, j))});
  return SparseIntervalMatrix::from_triplets(static_cast<int>(A.rows()), std::move(t));
}

MassBounds gershgorin_bounds(const Eigen::MatrixXd& M) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    double off = 0.0;
    for (int j = 0; j < M.cols(); ++j)
      if (j != i) off += std::fabs(M(i, j));
    lo = std::min(lo, M(i, i) - off);
    hi = std::max(hi, M(i, i) + off);
  }
  if (!(lo > 0.0)) throw std::runtime_error("gershgorin_bounds: not diagonally dominant");
  return {0.999 * lo, 1.001 * hi};
}

// random symmetric diagonally dominant pair (K, M), both positive definite
void random_pair(std::mt19937_64& gen, int n, Eigen::MatrixXd& K, Eigen::MatrixXd& M) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  K.setZero(n, n);
  M.setZero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      K(i, j) = K(j, i) = u(gen);
      M(i, j) = M(j, i) = 0.1 * u(gen);
    }
  for (int i = 0; i < n; ++i) {
    K(i, i) = K.row(i).cwiseAbs().sum() + 0.5 + std::fabs(u(gen));
    M(i, i) = M.row(i).cwiseAbs().sum() + 0.5 + 0.5 * std::fabs(u(gen));
  }
}

} // namespace

TEST_CASE("fp_eigs on the one-dof pentagon system") {
  ThetaTrig t = enclose_theta(5);
  SymmetricMesh mesh(5, 1);
  AssembledSystem sys = assemble_system(mesh, t);
  CHECK(sys.dof == 1);
  auto r = fp_eigs(sys.K0.midpoint(), sys.M0.midpoint(), 1);
  double expect = sys.K0.coeff(0, 0).mid() / sys.M0.coeff(0, 0).mid();
  CHECK(r.values(0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("fp_eigs matches the dense oracle and decreases in m") {
  ThetaTrig t = enclose_theta(5);
  double prev = std::numeric_limits<double>::infinity();
  for (int m : {2, 3, 4}) {
    SymmetricMesh mesh(5, m);
    AssembledSystem sys = assemble_system(mesh, t);
    auto r = fp_eigs(sys.K0.midpoint(), sys.M0.midpoint(), 2);
    oracle::DenseSystem ds = oracle::assemble_dense(mesh);
    oracle::VecLD vals;
    oracle::MatLD vecs;
    oracle::dense_geneig(ds.K, ds.M, vals, vecs);
    CHECK(std::fabs(r.values(0) - static_cast<double>(vals(0))) <= 1e-9 * vals(0));
    CHECK(std::fabs(r.values(1) - static_cast<double>(vals(1))) <= 1e-9 * vals(1));
    CHECK(r.values(0) < prev); // lambda_{1,h} decreases toward lambda_1 from above
    prev = r.values(0);
  }
}

TEST_CASE("residual enclosure") {
  // exact eigenpair of a 2x2 diagonal system: zero radius up to rounding
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2), M = Eigen::MatrixXd::Identity(2, 2);
  K(0, 0) = 2.0;
  K(1, 1) = 5.0;
  auto Ki = from_dense(K), Mi = from_dense(M);
  auto enc = residual_enclosure(Ki, Mi, {1.0, 0.0}, 2.0, {1.0, 1.0});
  CHECK(enc.value.contains(2.0));
  CHECK(enc.value.width() <= 1e-14);

  // random pairs: enclosure always contains a true eigenvalue
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd Kd, Md;
    random_pair(gen, 6, Kd, Md);
    oracle::MatLD Kld = Kd.cast<long double>(), Mld = Md.cast<long double>();
    oracle::VecLD vals;
    oracle::MatLD vecs;
    oracle::dense_geneig(Kld, Mld, vals, vecs);
    int pick = trial % 6;
    Eigen::VectorXd x = vecs.col(pick).cast<double>();
    // perturb the candidate slightly
    x(0) += 1e-8;
    double lam = static_cast<double>(vals(pick)) * (1 + 3e-9);
    auto e = residual_enclosure(from_dense(Kd), from_dense(Md),
                                std::vector<double>(x.data(), x.data() + 6), lam,
                                gershgorin_bounds(Md));
    bool contains_one = false;
    for (int i = 0; i < 6; ++i)
      contains_one = contains_one || e.value.contains(static_cast<double>(vals(i)));
    CHECK(contains_one);
  }
}

TEST_CASE("eigenvector error bound") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd Kd, Md;
    random_pair(gen, 6, Kd, Md);
    oracle::MatLD Kld = Kd.cast<long double>(), Mld = Md.cast<long double>();
    oracle::VecLD vals;
    oracle::MatLD vecs;
    oracle::dense_geneig(Kld, Mld, vals, vecs);
    // need a separated smallest eigenvalue
    if (vals(1) - vals(0) < 0.05 * vals(0)) continue;
    Eigen::VectorXd x = vecs.col(0).cast<double>();
    x(1) += 1e-7;
    double lam = static_cast<double>(vals(0));
    auto mb = gershgorin_bounds(Md);
    auto e = residual_enclosure(from_dense(Kd), from_dense(Md),
                                std::vector<double>(x.data(), x.data() + 6), lam, mb);
    double a = 0.9 * static_cast<double>(vals(1)) - e.value.hi();
    if (a <= 0) continue;
    // window [lam-a, lam+a] isolates the smallest eigenvalue
    a = std::min(a, static_cast<double>(vals(1) - vals(0)) * 0.9);
    certify_vector(e, a, mb);
    // true normalized eigenvector within the M-ball
    oracle::VecLD diff = vecs.col(0) - x.cast<long double>();
    long double dm = sqrtl((long double)(diff.transpose() * (Mld * diff)));
    CHECK(static_cast<double>(dm) <= e.err_m);
    // and within the entrywise box
    for (int i = 0; i < 6; ++i) CHECK((*e.vector)[i].contains(static_cast<double>(vecs(i, 0))));

    // halving the window at fixed residual at least quadruples the first term
    double t_full = e.rmr_upper / (a * a);
    double t_half = e.rmr_upper / ((a / 2) * (a / 2));
    CHECK(t_half >= 2 * t_full);
  }

  // exact eigenvector: bound collapses to rounding level
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2), M = Eigen::MatrixXd::Identity(2, 2);
  K(0, 0) = 2.0;
  K(1, 1) = 5.0;
  auto e = residual_enclosure(from_dense(K), from_dense(M), {1.0, 0.0}, 2.0, {1.0, 1.0});
  certify_vector(e, 1.0, {1.0, 1.0});
  CHECK(e.err_m <= 1e-14);
}

TEST_CASE("krawczyk eigenpair verification") {
  // 2x2 diagonal pair: immediate verification with a tight enclosure
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2), M = Eigen::MatrixXd::Identity(2, 2);
  K(0, 0) = 2.0;
  K(1, 1) = 5.0;
  auto kr = krawczyk_eigenpair(from_dense(K), from_dense(M), {1.0, 1e-3}, 2.0000004);
  CHECK(kr.verified);
  CHECK(kr.value.contains(2.0));
  CHECK(kr.value.width() <= 1e-12);

  // pentagon slice system at m=30
  ThetaTrig t = enclose_theta(5);
  SliceSystem ss = assemble_slice_system(5, 30, t);
  auto fp = fp_eigs(ss.K.midpoint(), ss.M.midpoint(), 2);
  std::vector<double> x(fp.vectors.col(0).data(), fp.vectors.col(0).data() + ss.dof);
  auto kr2 = krawczyk_eigenpair(ss.K, ss.M, x, fp.values(0));
  CHECK(kr2.verified);

  // residual route on the same input: krawczyk interval is contained in it
  auto re = residual_enclosure(ss.K, ss.M, x, fp.values(0), ss.mass_bounds);
  CHECK(re.value.contains(kr2.value));
  CHECK(kr2.value.width() < re.value.width());

  // the dense oracle eigenvalue lies inside
  SymmetricMesh mesh(5, 30);
  (void)mesh;
  // slice oracle: midpoint dense solve
  Eigen::MatrixXd Ks(ss.dof, ss.dof), Ms(ss.dof, ss.dof);
  for (int i = 0; i < ss.dof; ++i)
    for (int j = 0; j < ss.dof; ++j) {
      Ks(i, j) = ss.K.coeff(i, j).mid();
      Ms(i, j) = ss.M.coeff(i, j).mid();
    }
  oracle::MatLD Kld = Ks.cast<long double>(), Mld = Ms.cast<long double>();
  oracle::VecLD vals;
  oracle::MatLD vecs;
  oracle::dense_geneig(Kld, Mld, vals, vecs);
  CHECK(kr2.value.inflated(1e-10).contains(static_cast<double>(vals(0))));
}

TEST_CASE("conjugate gradient") {
  // identity: one iteration returns the rhs
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  auto r = cg_solve([](const Eigen::VectorXd& v) { return v; }, b);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK((r.x - b).norm() == 0.0);

  // random SPD 20x20 vs dense solve
  std::mt19937_64 gen(3);
  Eigen::MatrixXd A, M;
  random_pair(gen, 20, A, M);
  Eigen::VectorXd rhs = Eigen::VectorXd::Random(20);
  auto c = cg_solve([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); }, rhs,
                    1e-14, 1000);
  Eigen::VectorXd xref = A.ldlt().solve(rhs);
  CHECK(c.converged);
  CHECK((c.x - xref).norm() <= 1e-10 * xref.norm());
}

TEST_CASE("material-derivative midpoint solve reaches 1e-10") {
  ThetaTrig t = enclose_theta(5);
  SymmetricMesh mesh(5, 50);
  AssembledSystem sys = assemble_system(mesh, t);
  ElementBlocks blk = element_blocks(t, 5, 50);
  PartialBlocks pb = assemble_partials(mesh, blk);
  auto fp = fp_eigs(sys.K0.midpoint(), sys.M0.midpoint(), 2, 1e-13);

  IntervalVector u1(sys.dof);
  for (int i = 0; i < sys.dof; ++i) u1[i] = Interval(fp.vectors(i, 0));
  auto [f1, f2] = assemble_rhs_material(sys, pb, u1, Interval(fp.values(0)));
  Eigen::VectorXd f1m(sys.dof);
  for (int i = 0; i < sys.dof; ++i) f1m(i) = f1[i].mid();

  SpMat K = sys.K0.midpoint(), M = sys.M0.midpoint();
  Eigen::VectorXd b = M * fp.vectors.col(0);
  double gamma = 4.0 / b.norm();
  b *= gamma;
  double w = (fp.values(1) - fp.values(0)) / (gamma * gamma);
  auto apply = [&](const Eigen::VectorXd& v) {
    return Eigen::VectorXd(K * v - fp.values(0) * (M * v) + w * (b.dot(v)) * b);
  };
  auto cg = cg_solve(apply, f1m, 1e-11, 20000);
  CHECK(cg.converged);
  CHECK(cg.rel_residual <= 1e-10);
}

TEST_CASE("saddle enclosure") {
  // synthetic 4x4 with exact rational solution (0, 1, 1/2, 1/3)
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4), M = Eigen::MatrixXd::Identity(4, 4);
  K.diagonal() << 1.0, 2.0, 3.0, 4.0;
  AssembledSystem sys;
  sys.n = 5;
  sys.m = 1;
  sys.dof = 4;
  sys.K0 = from_dense(K);
  sys.M0 = from_dense(M);
  sys.mass_bounds = {1.0, 1.0};

  IntervalVector f{Interval(0.0), Interval(1.0), Interval(1.0), Interval(1.0)};
  std::vector<double> u1 = {1.0, 0.0, 0.0, 0.0};
  std::vector<double> U = {0.0, 1.0 + 3e-13, 0.5 - 2e-13, 1.0 / 3.0 + 1e-13};
  auto sol = saddle_enclosure(sys, Interval(1.0), Interval(2.0), f, 0.0, u1, 0.0, U, 4.0);
  CHECK(sol.solution[1].contains(1.0));
  CHECK(sol.solution[2].contains(0.5));
  CHECK(sol.solution[3].inflated(1e-18).contains(1.0 / 3.0));
  CHECK(sol.err_2 < 1e-10);

  // zero data with zero candidate: everything collapses to zero
  IntervalVector f0(4, Interval(0.0));
  std::vector<double> U0(4, 0.0);
  auto z = saddle_enclosure(sys, Interval(1.0), Interval(2.0), f0, 0.0, u1, 0.0, U0, 4.0);
  CHECK(z.residual_norm == 0.0);
  CHECK(z.err_2 == 0.0);

  // gap not positive: certification fails closed
  CHECK_THROWS_AS(
      saddle_enclosure(sys, Interval(1.0), Interval(0.9, 1.05), f, 0.0, u1, 0.0, U, 4.0),
      CertificationFailure);
}

TEST_CASE("interval cholesky positive definiteness") {
  Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(cholesky_spd_check(from_dense(I2)));

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = -1.0;
  CHECK_FALSE(cholesky_spd_check(from_dense(D)));

  ThetaTrig t = enclose_theta(5);
  SymmetricMesh mesh(5, 10);
  AssembledSystem sys = assemble_system(mesh, t);
  CHECK(cholesky_spd_check(sys.K0));

  // never certifies a matrix with a nonpositive eigenvalue (spot check)
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 1.0, 1.0, 1.0; // singular
  CHECK_FALSE(cholesky_spd_check(from_dense(S)));
}
