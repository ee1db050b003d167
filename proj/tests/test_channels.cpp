#include "doctest.h"
#include "oracles.hpp"
#include "treecast/channels.hpp"
#include "treecast/error.hpp"

#include <random>

using namespace treecast;

namespace {
Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("build_channel validates rows and flags ergodicity") {
  const Channel c = build_channel(mat({{0.7, 0.3}, {0.3, 0.7}}));
  CHECK(c.ergodic());
  CHECK(c.q() == 2);
  CHECK_THROWS_AS(build_channel(mat({{0.7, 0.2}, {0.3, 0.7}})), RowSumError);
  CHECK_THROWS_AS(build_channel(mat({{1.1, -0.1}, {0.3, 0.7}})), NegativeEntry);
  const Channel flip = build_channel(mat({{0, 1}, {1, 0}}));
  CHECK_FALSE(flip.ergodic());
  CHECK_THROWS_AS(flip.stationary(), NonErgodic);
  CHECK_THROWS_AS(build_channel(Matrix::Ones(2, 3) / 3.0), InvalidArgument);
}

TEST_CASE("a chain with a transient state is not ergodic") {
  // State 0 is never re-entered: v would put zero mass on it.
  const Channel c = build_channel(mat({{0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}}));
  CHECK_FALSE(c.ergodic());
}

TEST_CASE("stationary distributions") {
  CHECK(bsc(0.2).stationary().isApprox(Vector::Constant(2, 0.5)));
  const Channel c = build_channel(mat({{0.9, 0.1}, {0.3, 0.7}}));
  CHECK(c.stationary()(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(c.stationary()(1) == doctest::Approx(0.25).epsilon(1e-12));
  const Vector u = qsym(4, 0.3).stationary();
  for (int i = 0; i < 4; ++i) CHECK(u(i) == doctest::Approx(0.25));
}

TEST_CASE("second eigenvalue examples") {
  CHECK(bsc(0.1).lambda2() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(build_channel(mat({{0.9, 0.1}, {0.3, 0.7}})).lambda2() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(qsym(3, 0.2).lambda2() == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(bsc(0.5).lambda2() == doctest::Approx(0.0).epsilon(1e-12));
  // Rotation-like 3-cycle mixed with identity: complex pair, modulus reported.
  const Matrix cyc = 0.5 * Matrix::Identity(3, 3) + 0.5 * mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const double expected = std::abs(std::complex<double>(0.5, 0.0) + 0.5 * std::polar(1.0, 2.0 * M_PI / 3.0));
  CHECK(build_channel(cyc).lambda2() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noise channel constructors") {
  const Channel m = bsc(0.3);
  CHECK(power_noise(m, 0).n.isApprox(Matrix::Identity(2, 2)));
  CHECK(power_noise(m, 1).n.isApprox(m.matrix()));
  const Matrix sq = power_noise(m, 2).n;
  CHECK(sq(0, 0) == doctest::Approx(0.58));
  CHECK(sq(0, 1) == doctest::Approx(0.42));

  const Vector uni = Vector::Constant(2, 0.5);
  CHECK(mix_noise(uni, 0.0).n.isApprox(Matrix::Identity(2, 2)));
  const Matrix all = mix_noise(uni, 1.0).n;
  CHECK(all.row(0).isApprox(uni.transpose()));
  const Matrix mx = mix_noise(uni, 0.4).n;
  CHECK(mx(0, 0) == doctest::Approx(0.8));
  CHECK(mx(0, 1) == doctest::Approx(0.2));
  Vector degenerate(2);
  degenerate << 1.0, 0.0;
  CHECK_FALSE(mix_noise(degenerate, 0.5).nondegenerate);

  const Matrix er = erasure_noise(2, 0.25).n;
  CHECK(er.rows() == 2);
  CHECK(er.cols() == 3);
  CHECK(er.isApprox(mat({{0.75, 0, 0.25}, {0, 0.75, 0.25}})));
  CHECK(erasure_noise(3, 0.0).n.leftCols(3).isApprox(Matrix::Identity(3, 3)));
  CHECK(erasure_noise(3, 1.0).n.col(3).isApprox(Vector::Ones(3)));
}

TEST_CASE("channel properties on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int q = 2 + trial % 4;
    const Channel m = build_channel(oracle::random_stochastic(rng, q, q, 0.01));
    REQUIRE(m.ergodic());
    const Vector v = m.stationary();
    CHECK((v.transpose() * m.matrix() - v.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(v.minCoeff() > 0.0);
    CHECK((v - oracle::power_stationary(m.matrix())).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(m.lambda2() < 1.0);

    const int j = trial % 8, k = (trial / 8) % 8 + 1;
    Matrix mk = Matrix::Identity(q, q);
    for (int s = 0; s < k; ++s) mk = mk * m.matrix();
    CHECK((power_noise(m, j + k).n - power_noise(m, j).n * mk).cwiseAbs().maxCoeff() <= 1e-12);
    for (const Matrix& n : {power_noise(m, j).n, mix_noise(oracle::random_probability(rng, q), 0.3).n,
                            erasure_noise(q, 0.4).n})
      CHECK((n.rowwise().sum() - Vector::Ones(q)).cwiseAbs().maxCoeff() <= 1e-12);

    // Eigenvalues of a symmetric (hence diagonalizable) chain.
    const Matrix sym = 0.5 * (m.matrix() + m.matrix().transpose());
    const Matrix ds = sym.rowwise().sum().asDiagonal().inverse() * sym;
    if (std::abs(ds.rowwise().sum().maxCoeff() - 1.0) < 1e-12) {
      const Channel d = build_channel(ds);
      Matrix dk = Matrix::Identity(q, q);
      for (int s = 0; s < 3; ++s) dk = dk * ds;
      CHECK(build_channel(dk).lambda2() == doctest::Approx(std::pow(d.lambda2(), 3)).epsilon(1e-9));
    }
  }
}

TEST_CASE("orthonormal complement") {
  const Vector v = build_channel(mat({{0.9, 0.1}, {0.3, 0.7}})).stationary();
  const Matrix u = orthonormal_complement(v);
  CHECK(u.rows() == 2);
  CHECK(u.cols() == 1);
  CHECK(std::abs(u.col(0).dot(v)) <= 1e-14);
  CHECK(u.col(0).norm() == doctest::Approx(1.0));
}
