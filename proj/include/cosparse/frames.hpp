#pragma once

#include "cosparse/linops.hpp"
#include "cosparse/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cosparse {

/// Frame constants of an analysis operator: A = 1/||Omega^dag||_2,
/// B = ||Omega||_2.
struct FrameBounds {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
};

enum class RipMethod { Exhaustive, MonteCarlo };

struct RipEstimate {
  Index k = 0;
  double delta = 0.0;
  RipMethod method = RipMethod::Exhaustive;
  Index trials = 0;  // 0 for exhaustive
  std::uint64_t seed = 0;
};

std::string to_json(const RipEstimate& estimate);

/// Supports enumerated exhaustively must not exceed this count.
inline constexpr Index kDripEnumerationBudget = 200000;

/// Exact C(n, k), or -1 on overflow past the enumeration budget scale.
Index binomial_or_negative(Index n, Index k);

/// Polar-orthonormal factor of a seeded p x d Gaussian draw: orthonormal
/// columns, A = B = 1, D = Omega^T.
AnalysisPair random_tight_frame(Index p, Index d, std::uint64_t seed);

FrameBounds frame_bounds(const Matrix& omega);

/// D-RIP constant of `m_map` against columns `T` of the dictionary:
/// extremal generalized eigenvalues of (D_T^* M^* M D_T, D_T^* D_T),
/// restricted to the column space of D_T when it is rank-deficient.
double support_delta(const LinearMap& m_map, const Matrix& dict,
                     const std::vector<Index>& support);

RipEstimate drip_exhaustive(const LinearMap& m_map, const Matrix& dict, Index k);

/// Maximum of support_delta over `trials` uniform supports; the trial set
/// is a prefix-stable function of the seed, so more trials never lower
/// the estimate. Always a lower bound on the exhaustive value.
RipEstimate drip_monte_carlo(const LinearMap& m_map, const Matrix& dict, Index k,
                             Index trials, std::uint64_t seed);

/// Spectral norm of P_{T1} (I - M^* M) P_{T2} with P_T the orthogonal
/// projection onto range(D_T). Empty supports give 0.
double rip_projection_residual(const LinearMap& m_map, const Matrix& dict,
                               const std::vector<Index>& t1,
                               const std::vector<Index>& t2);

struct ContractionCheck {
  double rho = 0.0;
  bool satisfied = false;
};

/// rho = 2 * delta_ak * B / A; satisfied iff rho < 1 (strict).
ContractionCheck check_contraction_condition(const FrameBounds& bounds, double delta_ak);

}  // namespace cosparse
