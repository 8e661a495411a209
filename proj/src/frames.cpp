#include "cosparse/frames.hpp"

#include "cosparse/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace cosparse {

std::string to_json(const RipEstimate& estimate) {
  nlohmann::json j;
  j["k"] = estimate.k;
  j["delta"] = estimate.delta;
  j["method"] = estimate.method == RipMethod::Exhaustive ? "exhaustive" : "monte_carlo";
  j["trials"] = estimate.trials;
  j["seed"] = estimate.seed;
  return j.dump();
}

Index binomial_or_negative(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Index result = 1;
  for (Index i = 1; i <= k; ++i) {
    // exact at these scales; bail out far past the budget
    result = result * (n - k + i) / i;
    if (result > 100 * kDripEnumerationBudget) return -1;
  }
  return result;
}

AnalysisPair random_tight_frame(Index p, Index d, std::uint64_t seed) {
  if (p < d) throw std::invalid_argument("random_tight_frame requires p >= d");
  Rng rng(seed);
  const Matrix gauss = rng.gaussian_matrix(p, d);
  Eigen::BDCSVD<Matrix> svd(gauss, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix omega = svd.matrixU() * svd.matrixV().transpose();
  Matrix synthesis = omega.transpose();
  return analysis_pair_from_dense(std::move(omega), std::move(synthesis), 1.0, 1.0);
}

FrameBounds frame_bounds(const Matrix& omega) {
  Eigen::BDCSVD<Matrix> svd(omega);
  const Vector& sv = svd.singularValues();
  const Index rank_dim = std::min(omega.rows(), omega.cols());
  const double largest = sv[0];
  const double smallest = sv[rank_dim - 1];
  if (omega.rows() < omega.cols() || smallest <= 1e-12 * largest)
    throw RankError("frame_bounds: operator does not have full column rank");
  return FrameBounds{smallest, largest};
}

double support_delta(const LinearMap& m_map, const Matrix& dict,
                     const std::vector<Index>& support) {
  if (support.empty()) return 0.0;
  const Index d = dict.rows();
  Matrix d_t(d, static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index col = support[i];
    if (col < 0 || col >= dict.cols())
      throw std::invalid_argument("support index out of range");
    d_t.col(static_cast<Index>(i)) = dict.col(col);
  }
  // Orthonormal basis of range(D_T); rank-deficient supports contribute
  // through the restriction to the column space.
  Eigen::JacobiSVD<Matrix> svd(d_t, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12 * sv[0]) ++rank;
  if (rank == 0) return 0.0;
  const Matrix basis = svd.matrixU().leftCols(rank);
  CMatrix images(m_map.rows(), rank);
  for (Index i = 0; i < rank; ++i) images.col(i) = m_map.forward(basis.col(i));
  const Matrix gram = (images.adjoint() * images).real();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const double lambda_min = eig.eigenvalues()[0];
  const double lambda_max = eig.eigenvalues()[rank - 1];
  return std::max(lambda_max - 1.0, 1.0 - lambda_min);
}

namespace {

void check_rip_inputs(const LinearMap& m_map, const Matrix& dict, Index k) {
  if (m_map.cols() != dict.rows())
    throw DimensionError("dictionary rows must match measurement map cols");
  if (k < 0 || k > dict.cols())
    throw std::invalid_argument("sparsity level out of range");
}

}  // namespace

RipEstimate drip_exhaustive(const LinearMap& m_map, const Matrix& dict, Index k) {
  check_rip_inputs(m_map, dict, k);
  const Index p = dict.cols();
  const Index combos = binomial_or_negative(p, k);
  if (p > 20 || combos < 0 || combos > kDripEnumerationBudget)
    throw std::invalid_argument(
        "drip_exhaustive: enumeration budget exceeded (need p <= 20 and "
        "C(p,k) <= 2e5)");
  RipEstimate estimate;
  estimate.k = k;
  estimate.method = RipMethod::Exhaustive;
  if (k == 0) return estimate;
  std::vector<Index> support(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
  for (;;) {
    estimate.delta = std::max(estimate.delta, support_delta(m_map, dict, support));
    // next k-combination of [0, p)
    Index i = k - 1;
    while (i >= 0 && support[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) break;
    ++support[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
  }
  return estimate;
}

RipEstimate drip_monte_carlo(const LinearMap& m_map, const Matrix& dict, Index k,
                             Index trials, std::uint64_t seed) {
  check_rip_inputs(m_map, dict, k);
  if (trials < 1) throw std::invalid_argument("drip_monte_carlo needs trials >= 1");
  RipEstimate estimate;
  estimate.k = k;
  estimate.method = RipMethod::MonteCarlo;
  estimate.trials = trials;
  estimate.seed = seed;
  if (k == 0) return estimate;
  const Index p = dict.cols();
  for (Index trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
    const std::vector<Index> support = rng.sample_without_replacement(p, k);
    estimate.delta = std::max(estimate.delta, support_delta(m_map, dict, support));
  }
  return estimate;
}

namespace {

/// Orthonormal basis of range(D_T); empty matrix for rank 0.
Matrix range_basis(const Matrix& dict, const std::vector<Index>& support) {
  const Index d = dict.rows();
  Matrix d_t(d, static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index col = support[i];
    if (col < 0 || col >= dict.cols())
      throw std::invalid_argument("support index out of range");
    d_t.col(static_cast<Index>(i)) = dict.col(col);
  }
  Eigen::JacobiSVD<Matrix> svd(d_t, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12 * sv[0]) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

double rip_projection_residual(const LinearMap& m_map, const Matrix& dict,
                               const std::vector<Index>& t1,
                               const std::vector<Index>& t2) {
  if (t1.empty() || t2.empty()) return 0.0;
  if (m_map.cols() != dict.rows())
    throw DimensionError("dictionary rows must match measurement map cols");
  const Matrix u1 = range_basis(dict, t1);
  const Matrix u2 = range_basis(dict, t2);
  if (u1.cols() == 0 || u2.cols() == 0) return 0.0;
  CMatrix images1(m_map.rows(), u1.cols());
  for (Index i = 0; i < u1.cols(); ++i) images1.col(i) = m_map.forward(u1.col(i));
  CMatrix images2(m_map.rows(), u2.cols());
  for (Index i = 0; i < u2.cols(); ++i) images2.col(i) = m_map.forward(u2.col(i));
  // ||U1 C U2^T||_2 = ||C||_2 with C = U1^T (I - M^*M) U2
  const Matrix core = u1.transpose() * u2 - (images1.adjoint() * images2).real();
  Eigen::JacobiSVD<Matrix> svd(core);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()[0];
}

ContractionCheck check_contraction_condition(const FrameBounds& bounds, double delta_ak) {
  if (bounds.lower <= 0.0 || bounds.upper < bounds.lower)
    throw std::invalid_argument("invalid frame bounds");
  if (delta_ak < 0.0) throw std::invalid_argument("delta must be nonnegative");
  ContractionCheck check;
  check.rho = 2.0 * delta_ak * bounds.upper / bounds.lower;
  check.satisfied = check.rho < 1.0;
  return check;
}

}  // namespace cosparse
