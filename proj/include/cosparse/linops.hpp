#pragma once

#include "cosparse/types.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace cosparse {

// Matrix-free linear operator. Signals live in R^cols; measurements live in
// R^rows or C^rows depending on field(). Complex measurement spaces are
// treated as real vector spaces: adjoint() returns Re(A^H y), so A* A is a
// real symmetric positive semidefinite map (the usual CS-MRI convention)
// and <Ax, y> = <x, A*y> holds for the real inner product Re<.,.>.
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Field field() const noexcept { return field_; }

  CVector forward(const Eigen::Ref<const Vector>& x) const;
  Vector adjoint(const Eigen::Ref<const CVector>& y) const;

  // Fast paths for field() == Real maps; no complex temporaries.
  Vector forward_real(const Eigen::Ref<const Vector>& x) const;
  Vector adjoint_real(const Eigen::Ref<const Vector>& y) const;

 protected:
  LinearMap(Index rows, Index cols, Field field);

  virtual void eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const;
  virtual void eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const;
  virtual void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const;
  virtual void eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const;

 private:
  Index rows_;
  Index cols_;
  Field field_;
};

using LinearMapPtr = std::shared_ptr<const LinearMap>;

/// Dense real matrix operator.
class DenseRealMap final : public LinearMap {
 public:
  explicit DenseRealMap(Matrix a);
  const Matrix& matrix() const noexcept { return a_; }

 protected:
  void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const override;
  void eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const override;

 private:
  Matrix a_;
};

/// Dense complex matrix operator on real input vectors.
class DenseComplexMap final : public LinearMap {
 public:
  explicit DenseComplexMap(CMatrix a);
  const CMatrix& matrix() const noexcept { return a_; }

 protected:
  void eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const override;
  void eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const override;

 private:
  CMatrix a_;
};

class IdentityMap final : public LinearMap {
 public:
  explicit IdentityMap(Index n);

 protected:
  void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const override;
  void eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const override;
};

/// Transpose view of a real map (forward and adjoint swapped).
class TransposedMap final : public LinearMap {
 public:
  explicit TransposedMap(LinearMapPtr base);

 protected:
  void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const override;
  void eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const override;

 private:
  LinearMapPtr base_;
};

// outer . inner; inner must be a real-field map. Forward is literally the
// sequential application, so composition is bit-for-bit equal to applying
// the parts one after the other.
class ComposedMap final : public LinearMap {
 public:
  ComposedMap(LinearMapPtr outer, LinearMapPtr inner);

 protected:
  void eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const override;
  void eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const override;
  void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const override;
  void eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const override;

 private:
  LinearMapPtr outer_;
  LinearMapPtr inner_;
};

LinearMapPtr dense_map(Matrix a);
LinearMapPtr dense_map(CMatrix a);
LinearMapPtr compose(LinearMapPtr outer, LinearMapPtr inner);

/// Boolean sampling grid over an h x w DFT index lattice (row-major,
/// frequency (0,0) = DC at cell (0,0)).
struct SamplingMask {
  Index height = 0;
  Index width = 0;
  std::vector<std::uint8_t> sampled;  // row-major h*w
  Index count = 0;

  bool at(Index r, Index c) const {
    return sampled[static_cast<std::size_t>(r * width + c)] != 0;
  }
  void set(Index r, Index c, bool value);

  static SamplingMask empty(Index h, Index w);
  static SamplingMask full(Index h, Index w);
};

/// `lines` straight lines through the centered DC at uniformly spaced
/// angles in [0, pi), nearest-neighbor rasterized over a 2n-sample
/// parameter sweep. The DC cell is always included.
SamplingMask radial_mask(Index n, Index lines);

// Subsampled unitary 2-D DFT of a real h*w signal. Forward returns the
// sampled frequencies (mask row-major scan order); adjoint zero-fills,
// applies the inverse unitary DFT and keeps the real part.
class PartialFourierMap final : public LinearMap {
 public:
  explicit PartialFourierMap(SamplingMask mask);
  const SamplingMask& mask() const noexcept { return mask_; }

 protected:
  void eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const override;
  void eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const override;

 private:
  SamplingMask mask_;
  std::vector<std::pair<Index, Index>> cells_;
  double scale_;
};

LinearMapPtr partial_fourier(SamplingMask mask);

/// Analysis operator Omega (p x d) bundled with a synthesis map D (d x p)
/// satisfying D Omega = I, plus frame constants A <= B.
struct AnalysisPair {
  LinearMapPtr omega;
  LinearMapPtr synthesis;
  double frame_lower = 1.0;  // A
  double frame_upper = 1.0;  // B
  std::shared_ptr<const Matrix> omega_dense;  // set when an explicit matrix exists

  Index d() const { return omega->cols(); }
  Index p() const { return omega->rows(); }

  Vector analyze(const Eigen::Ref<const Vector>& x) const { return omega->forward_real(x); }
  Vector synthesize(const Eigen::Ref<const Vector>& w) const {
    return synthesis->forward_real(w);
  }

  /// Dense Omega, or throws for matrix-free pairs.
  const Matrix& dense_omega() const;
};

/// Pair backed by explicit matrices; checks D*Omega = I on a probe vector.
AnalysisPair analysis_pair_from_dense(Matrix omega, Matrix synthesis,
                                      double frame_lower, double frame_upper);

/// Identity analysis operator (Omega = D = I_d).
AnalysisPair identity_pair(Index d);

/// One-level undecimated Haar on h x w images, periodic boundary,
/// subbands [LL, LH, HL, HH] stacked (p = 4d). Parseval tight: the 2-D
/// stencils carry weight 1/4 so Omega^T Omega = I and D = Omega^T.
AnalysisPair undecimated_haar(Index height, Index width);

/// Moore-Penrose pseudo-inverse of a p x d matrix with p >= d. Throws
/// RankError when s_min <= 1e-12 * s_max.
Matrix pseudo_inverse(const Matrix& omega);

}  // namespace cosparse
