#include "cosparse/frames.hpp"
#include "cosparse/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cosparse;

TEST_SUITE_BEGIN("frames");

TEST_CASE("random tight frame: square case is orthogonal") {
  const AnalysisPair pair = random_tight_frame(4, 4, 1);
  const Matrix& omega = pair.dense_omega();
  CHECK((omega.transpose() * omega - Matrix::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("random tight frame: 144x120 has unit singular values") {
  const AnalysisPair pair = random_tight_frame(144, 120, 7);
  Eigen::BDCSVD<Matrix> svd(pair.dense_omega());
  CHECK(std::abs(svd.singularValues()[0] - 1.0) <= 1e-10);
  CHECK(std::abs(svd.singularValues()[119] - 1.0) <= 1e-10);
}

TEST_CASE("random tight frame is deterministic per seed") {
  const AnalysisPair a = random_tight_frame(10, 6, 99);
  const AnalysisPair b = random_tight_frame(10, 6, 99);
  CHECK(a.dense_omega() == b.dense_omega());
  CHECK_THROWS_AS((void)random_tight_frame(5, 6, 0), std::invalid_argument);
}

TEST_CASE("frame bounds of identity and scalings") {
  const FrameBounds id = frame_bounds(Matrix::Identity(5, 5));
  CHECK(id.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.upper == doctest::Approx(1.0).epsilon(1e-12));
  const FrameBounds two = frame_bounds(2.0 * Matrix::Identity(5, 5));
  CHECK(two.lower == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.upper == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("frame bounds of a random tight frame are 1") {
  const FrameBounds bounds = frame_bounds(random_tight_frame(20, 12, 3).dense_omega());
  CHECK(std::abs(bounds.lower - 1.0) <= 1e-9);
  CHECK(std::abs(bounds.upper - 1.0) <= 1e-9);
}

TEST_CASE("frame bounds reject rank deficiency") {
  Matrix defective(5, 3);
  defective.setZero();
  defective.col(0).setOnes();
  CHECK_THROWS_AS((void)frame_bounds(defective), RankError);
}

TEST_CASE("exhaustive D-RIP of the identity map is zero") {
  const IdentityMap id(6);
  const Matrix dict = random_tight_frame(8, 6, 5).dense_omega().transpose();
  for (Index k : {1, 2, 3}) {
    const RipEstimate est = drip_exhaustive(id, dict, k);
    CHECK(est.delta <= 1e-12);
    CHECK(est.method == RipMethod::Exhaustive);
    CHECK(est.trials == 0);
  }
}

TEST_CASE("exhaustive D-RIP of 2I at k=1 is 3") {
  auto m = dense_map(Matrix(2.0 * Matrix::Identity(5, 5)));
  const Matrix dict = random_tight_frame(7, 5, 2).dense_omega().transpose();
  const RipEstimate est = drip_exhaustive(*m, dict, 1);
  CHECK(est.delta == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("exhaustive D-RIP with identity dictionary matches the singular value oracle") {
  Rng rng(17);
  Matrix m = rng.gaussian_matrix(6, 8);
  m /= std::sqrt(6.0);
  const RipEstimate est = drip_exhaustive(*dense_map(m), Matrix::Identity(8, 8), 2);
  CHECK(est.delta == doctest::Approx(oracles::rip_by_singular_values(m, 2)).epsilon(1e-10));
}

TEST_CASE("exhaustive D-RIP enforces the enumeration budget") {
  const IdentityMap id(30);
  CHECK_THROWS_AS((void)drip_exhaustive(id, Matrix::Identity(30, 30), 3),
                  std::invalid_argument);
  const IdentityMap small(18);
  CHECK_THROWS_AS((void)drip_exhaustive(small, Matrix::Identity(18, 18), 9),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo D-RIP reaches the exhaustive value on a tiny instance") {
  Rng rng(23);
  Matrix m = rng.gaussian_matrix(3, 4);
  const Matrix dict = Matrix::Identity(4, 4);
  const RipEstimate brute = drip_exhaustive(*dense_map(m), dict, 1);
  // 4 supports; 200 seeded trials cover them all
  const RipEstimate mc = drip_monte_carlo(*dense_map(m), dict, 1, 200, 9);
  CHECK(mc.delta == doctest::Approx(brute.delta).epsilon(1e-12));
}

TEST_CASE("Monte Carlo D-RIP of identity is zero and nested in trials") {
  const IdentityMap id(10);
  const Matrix dict = random_tight_frame(12, 10, 3).dense_omega().transpose();
  CHECK(drip_monte_carlo(id, dict, 3, 5, 1).delta <= 1e-12);
  Rng rng(29);
  Matrix m = rng.gaussian_matrix(6, 10);
  m /= std::sqrt(6.0);
  const double d10 = drip_monte_carlo(*dense_map(m), dict, 3, 10, 4).delta;
  const double d20 = drip_monte_carlo(*dense_map(m), dict, 3, 20, 4).delta;
  CHECK(d20 >= d10);
}

TEST_CASE("Monte Carlo never exceeds exhaustive") {
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix m = rng.gaussian_matrix(5, 8);
    m /= std::sqrt(5.0);
    const Matrix dict = random_tight_frame(10, 8, seed).dense_omega().transpose();
    for (Index k : {1, 2, 3}) {
      const double brute = drip_exhaustive(*dense_map(m), dict, k).delta;
      const double mc = drip_monte_carlo(*dense_map(m), dict, k, 30, seed).delta;
      CHECK(mc <= brute + 1e-12);
    }
  }
}

TEST_CASE("exhaustive delta is non-decreasing in k") {
  Rng rng(37);
  Matrix m = rng.gaussian_matrix(7, 9);
  m /= std::sqrt(7.0);
  const Matrix dict = random_tight_frame(11, 9, 8).dense_omega().transpose();
  double previous = 0.0;
  for (Index k = 1; k <= 5; ++k) {
    const double delta = drip_exhaustive(*dense_map(m), dict, k).delta;
    CHECK(delta >= previous - 1e-12);
    previous = delta;
  }
}

TEST_CASE("projection residual vanishes for the identity map") {
  const IdentityMap id(6);
  const Matrix dict = random_tight_frame(8, 6, 2).dense_omega().transpose();
  CHECK(rip_projection_residual(id, dict, {0, 2}, {1, 5}) <= 1e-12);
  CHECK(rip_projection_residual(id, dict, {}, {1}) == 0.0);
}

TEST_CASE("projection residual on one support equals its delta") {
  Rng rng(41);
  Matrix m = rng.gaussian_matrix(5, 7);
  m /= std::sqrt(5.0);
  const Matrix dict = random_tight_frame(9, 7, 4).dense_omega().transpose();
  const std::vector<Index> support{1, 4, 6};
  const double delta = support_delta(*dense_map(m), dict, support);
  const double residual = rip_projection_residual(*dense_map(m), dict, support, support);
  CHECK(residual == doctest::Approx(delta).epsilon(1e-10));
}

TEST_CASE("projection residual is bounded by the exhaustive delta (Lemma 4 / Cor 5)") {
  Rng rng(43);
  Matrix m = rng.gaussian_matrix(6, 8);
  m /= std::sqrt(6.0);
  const Matrix dict = random_tight_frame(10, 8, 6).dense_omega().transpose();
  Rng pick(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t1 = pick.sample_without_replacement(10, 2);
    const auto t2 = pick.sample_without_replacement(10, 2);
    const double bound = drip_exhaustive(*dense_map(m), dict, 4).delta;
    CHECK(rip_projection_residual(*dense_map(m), dict, t1, t2) <= bound + 1e-10);
  }
}

TEST_CASE("Corollary 2: ||M P_T||^2 <= 1 + delta_k by direct spectral norm") {
  Rng rng(47);
  Matrix m = rng.gaussian_matrix(6, 8);
  m /= std::sqrt(6.0);
  const Matrix dict = random_tight_frame(10, 8, 7).dense_omega().transpose();
  const double delta2 = drip_exhaustive(*dense_map(m), dict, 2).delta;
  Rng pick(48);
  for (int trial = 0; trial < 10; ++trial) {
    const auto support = pick.sample_without_replacement(10, 2);
    Matrix d_t(8, 2);
    for (int i = 0; i < 2; ++i) d_t.col(i) = dict.col(support[static_cast<std::size_t>(i)]);
    // P_T = U U^T for an orthonormal basis U of range(D_T)
    Eigen::JacobiSVD<Matrix> svd(d_t, Eigen::ComputeThinU);
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-12 * svd.singularValues()[0]) ++rank;
    const Matrix basis = svd.matrixU().leftCols(rank);
    Eigen::JacobiSVD<Matrix> norm_svd(m * basis);
    const double spectral = norm_svd.singularValues()[0];
    CHECK(spectral * spectral <= 1.0 + delta2 + 1e-10);
  }
}

TEST_CASE("Lemma 6: non-sparse vectors obey the scaled upper D-RIP bound") {
  Rng rng(53);
  Matrix m = rng.gaussian_matrix(8, 10);
  m /= std::sqrt(8.0);
  const AnalysisPair pair = random_tight_frame(12, 10, 9);
  const Matrix dict = pair.dense_omega().transpose();
  const Index k = 3;
  const double delta = drip_exhaustive(*dense_map(m), dict, k).delta;
  const double lower_bound = frame_bounds(pair.dense_omega()).lower;
  const double factor = std::sqrt(1.0 + delta) / lower_bound;
  Rng draws(54);
  for (int i = 0; i < 1000; ++i) {
    const Vector w = draws.gaussian_vector(12);
    const double lhs = (m * (dict * w)).norm();
    const double rhs =
        factor * (w.norm() + w.lpNorm<1>() / std::sqrt(static_cast<double>(k)));
    CHECK(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("contraction condition arithmetic") {
  const ContractionCheck a = check_contraction_condition(FrameBounds{1.0, 1.0}, 0.4);
  CHECK(a.rho == doctest::Approx(0.8));
  CHECK(a.satisfied);
  const ContractionCheck b = check_contraction_condition(FrameBounds{1.0, 1.0}, 0.5);
  CHECK(b.rho == doctest::Approx(1.0));
  CHECK_FALSE(b.satisfied);  // strict inequality
  const ContractionCheck c = check_contraction_condition(FrameBounds{1.0, 2.0}, 0.3);
  CHECK(c.rho == doctest::Approx(1.2));
  CHECK_FALSE(c.satisfied);
}

TEST_CASE("rip estimates serialize to the documented JSON shape") {
  RipEstimate est;
  est.k = 3;
  est.delta = 0.25;
  est.method = RipMethod::MonteCarlo;
  est.trials = 40;
  est.seed = 7;
  const std::string json = to_json(est);
  CHECK(json.find("\"k\":3") != std::string::npos);
  CHECK(json.find("\"delta\":0.25") != std::string::npos);
  CHECK(json.find("\"method\":\"monte_carlo\"") != std::string::npos);
  CHECK(json.find("\"trials\":40") != std::string::npos);
  CHECK(json.find("\"seed\":7") != std::string::npos);
}

TEST_SUITE_END();
