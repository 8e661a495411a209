#include "cosparse/linops.hpp"
#include "cosparse/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <complex>

using namespace cosparse;

namespace {

CVector random_complex(Rng& rng, Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = {rng.gaussian(), rng.gaussian()};
  return v;
}

// |<Ax,y> - <x,A*y>| <= tol * ||Ax|| ||y||, real inner product convention
void check_adjoint_pairs(const LinearMap& map, std::uint64_t seed, int pairs) {
  Rng rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const Vector x = rng.gaussian_vector(map.cols());
    const CVector y = random_complex(rng, map.rows());
    const CVector ax = map.forward(x);
    const double lhs = ax.conjugate().cwiseProduct(y).sum().real();
    const double rhs = x.dot(map.adjoint(y));
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, ax.norm() * y.norm()));
  }
}

}  // namespace

TEST_SUITE_BEGIN("linops");

TEST_CASE("dense map identity forward") {
  auto map = dense_map(Matrix::Identity(3, 3));
  Vector x(3);
  x << 1, 2, 3;
  const Vector out = map->forward_real(x);
  CHECK(out.isApprox(x));
  CHECK(map->field() == Field::Real);
}

TEST_CASE("dense map adjoint swaps under permutation matrix") {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  auto map = dense_map(a);
  Vector y(2);
  y << 5, -2;
  const Vector out = map->adjoint_real(y);
  CHECK(out[0] == -2.0);
  CHECK(out[1] == 5.0);
}

TEST_CASE("dense map adjoint identity on random 5x4") {
  Rng rng(11);
  auto map = dense_map(rng.gaussian_matrix(5, 4));
  Rng pairs(12);
  const Vector x = pairs.gaussian_vector(4);
  const Vector y = pairs.gaussian_vector(5);
  const double lhs = map->forward_real(x).dot(y);
  const double rhs = x.dot(map->adjoint_real(y));
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("dense map rejects dimension mismatch on apply") {
  auto map = dense_map(Matrix::Identity(3, 3));
  CHECK_THROWS_AS((void)map->forward_real(Vector::Zero(4)), DimensionError);
  CHECK_THROWS_AS((void)map->adjoint(CVector::Zero(2)), DimensionError);
}

TEST_CASE("adjoint consistency across operator types") {
  Rng rng(21);
  check_adjoint_pairs(*dense_map(rng.gaussian_matrix(6, 9)), 100, 100);
  CMatrix c(4, 5);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 5; ++j) c(i, j) = {rng.gaussian(), rng.gaussian()};
  check_adjoint_pairs(*dense_map(c), 101, 100);
  check_adjoint_pairs(*partial_fourier(radial_mask(8, 3)), 102, 100);
  check_adjoint_pairs(*undecimated_haar(4, 6).omega, 103, 100);
  check_adjoint_pairs(IdentityMap(7), 104, 20);
}

TEST_CASE("composition applies parts sequentially, bit for bit") {
  Rng rng(31);
  const Matrix outer = rng.gaussian_matrix(4, 6);
  const Matrix inner = rng.gaussian_matrix(6, 5);
  auto composed = compose(dense_map(outer), dense_map(inner));
  CHECK(composed->rows() == 4);
  CHECK(composed->cols() == 5);
  const Vector x = rng.gaussian_vector(5);
  const Vector direct = dense_map(outer)->forward_real(dense_map(inner)->forward_real(x));
  const Vector once = composed->forward_real(x);
  CHECK((once - direct).norm() == 0.0);
}

TEST_CASE("partial Fourier with full mask is an isometry") {
  auto map = partial_fourier(SamplingMask::full(8, 8));
  Rng rng(41);
  const Vector x = rng.gaussian_vector(64);
  CHECK(std::abs(map->forward(x).norm() - x.norm()) <= 1e-10 * x.norm());
}

TEST_CASE("partial Fourier DC-only measures c*n on a constant image") {
  SamplingMask mask = SamplingMask::empty(8, 8);
  mask.set(0, 0, true);
  auto map = partial_fourier(mask);
  const CVector out = map->forward(Vector::Constant(64, 0.75));
  REQUIRE(out.size() == 1);
  CHECK(std::abs(out[0] - std::complex<double>(0.75 * 8.0, 0.0)) <= 1e-12);
}

TEST_CASE("partial Fourier forward matches the direct DFT") {
  Rng rng(42);
  const Matrix grid = rng.gaussian_matrix(8, 8);
  Vector x(64);
  for (Index r = 0; r < 8; ++r)
    for (Index c = 0; c < 8; ++c) x[r * 8 + c] = grid(r, c);
  const CMatrix reference = oracles::direct_dft2(grid);
  auto map = partial_fourier(SamplingMask::full(8, 8));
  const CVector out = map->forward(x);
  double max_err = 0.0;
  for (Index r = 0; r < 8; ++r)
    for (Index c = 0; c < 8; ++c)
      max_err = std::max(max_err, std::abs(out[r * 8 + c] - reference(r, c)));
  CHECK(max_err <= 1e-10);
  // round trip through the adjoint
  const Vector back = map->adjoint(out);
  CHECK((back - x).norm() <= 1e-10 * x.norm());
}

TEST_CASE("partial Fourier rejects wrong input length") {
  auto map = partial_fourier(SamplingMask::full(4, 4));
  CHECK_THROWS_AS((void)map->forward(Vector::Zero(15)), DimensionError);
}

TEST_CASE("undecimated Haar: details of a constant image vanish") {
  const AnalysisPair pair = undecimated_haar(6, 6);
  const Vector w = pair.analyze(Vector::Constant(36, 2.5));
  CHECK(w.head(36).isApprox(Vector::Constant(36, 2.5)));
  CHECK(w.tail(3 * 36).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("undecimated Haar is Parseval and D Omega = I") {
  const AnalysisPair pair = undecimated_haar(8, 8);
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const Vector x = rng.gaussian_vector(64);
    const Vector w = pair.analyze(x);
    CHECK(std::abs(w.norm() - x.norm()) <= 1e-10 * x.norm());
    CHECK((pair.synthesize(w) - x).norm() <= 1e-10 * x.norm());
  }
}

TEST_CASE("analysis pair norm bounds hold on random inputs") {
  const AnalysisPair pair = undecimated_haar(4, 8);
  Rng rng(52);
  for (int i = 0; i < 100; ++i) {
    const Vector x = rng.gaussian_vector(pair.d());
    const Vector w = rng.gaussian_vector(pair.p());
    CHECK(pair.analyze(x).norm() <= pair.frame_upper * x.norm() * (1 + 1e-12));
    CHECK(pair.synthesize(w).norm() <= (1.0 / pair.frame_lower) * w.norm() * (1 + 1e-12));
  }
}

TEST_CASE("pseudo inverse of orthonormal columns is the transpose") {
  Matrix q(3, 2);
  q << 1, 0, 0, 1, 0, 0;
  CHECK(pseudo_inverse(q).isApprox(q.transpose(), 1e-12));
}

TEST_CASE("pseudo inverse of 2I is I/2") {
  const Matrix two_i = 2.0 * Matrix::Identity(4, 4);
  CHECK(pseudo_inverse(two_i).isApprox(0.5 * Matrix::Identity(4, 4), 1e-12));
}

TEST_CASE("pseudo inverse left-inverts a random tall matrix") {
  Rng rng(61);
  const Matrix omega = rng.gaussian_matrix(12, 10);
  const Matrix pinv = pseudo_inverse(omega);
  CHECK((pinv * omega - Matrix::Identity(10, 10)).norm() <= 1e-10);
}

TEST_CASE("pseudo inverse raises an explicit rank error") {
  Matrix defective(4, 3);
  defective.setZero();
  defective.col(0).setOnes();
  defective.col(1).setOnes();
  defective.col(2).setConstant(2.0);
  CHECK_THROWS_AS((void)pseudo_inverse(defective), RankError);
}

TEST_CASE("radial mask: single line is one row through DC") {
  const SamplingMask mask = radial_mask(4, 1);
  CHECK(mask.count <= 5);
  CHECK(mask.at(0, 0));
  for (Index r = 1; r < 4; ++r)
    for (Index c = 0; c < 4; ++c) CHECK_FALSE(mask.at(r, c));
}

TEST_CASE("radial mask: 18 lines at n=256 sample about 6.5 percent") {
  const SamplingMask mask = radial_mask(256, 18);
  const double fraction = static_cast<double>(mask.count) / (256.0 * 256.0);
  CHECK(fraction >= 0.055);
  CHECK(fraction <= 0.075);
}

TEST_CASE("radial mask always contains DC") {
  for (Index lines : {1, 2, 5, 9, 16})
    CHECK(radial_mask(16, lines).at(0, 0));
  CHECK_THROWS_AS((void)radial_mask(16, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)radial_mask(16, 33), std::invalid_argument);
}

TEST_CASE("mask count tracks set cells") {
  SamplingMask mask = SamplingMask::empty(3, 5);
  mask.set(1, 2, true);
  mask.set(1, 2, true);
  mask.set(0, 4, true);
  CHECK(mask.count == 2);
  mask.set(1, 2, false);
  CHECK(mask.count == 1);
}

TEST_SUITE_END();
