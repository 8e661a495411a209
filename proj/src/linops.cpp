#include "cosparse/linops.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cosparse {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw DimensionError(message);
}

}  // namespace

LinearMap::LinearMap(Index rows, Index cols, Field field)
    : rows_(rows), cols_(cols), field_(field) {
  if (rows < 0 || cols < 0) throw DimensionError("operator dimensions must be nonnegative");
}

CVector LinearMap::forward(const Eigen::Ref<const Vector>& x) const {
  require(x.size() == cols_, "forward: input length != cols");
  CVector out(rows_);
  eval_forward(x, out);
  return out;
}

Vector LinearMap::adjoint(const Eigen::Ref<const CVector>& y) const {
  require(y.size() == rows_, "adjoint: input length != rows");
  Vector out(cols_);
  eval_adjoint(y, out);
  return out;
}

Vector LinearMap::forward_real(const Eigen::Ref<const Vector>& x) const {
  require(field_ == Field::Real, "forward_real on a complex-field map");
  require(x.size() == cols_, "forward: input length != cols");
  Vector out(rows_);
  eval_forward_real(x, out);
  return out;
}

Vector LinearMap::adjoint_real(const Eigen::Ref<const Vector>& y) const {
  require(field_ == Field::Real, "adjoint_real on a complex-field map");
  require(y.size() == rows_, "adjoint: input length != rows");
  Vector out(cols_);
  eval_adjoint_real(y, out);
  return out;
}

void LinearMap::eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const {
  Vector tmp(rows_);
  eval_forward_real(x, tmp);
  out = tmp.cast<std::complex<double>>();
}

void LinearMap::eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const {
  eval_adjoint_real(y.real(), out);
}

void LinearMap::eval_forward_real(const Eigen::Ref<const Vector>&, Vector&) const {
  throw std::logic_error("real evaluation not provided by this map");
}

void LinearMap::eval_adjoint_real(const Eigen::Ref<const Vector>&, Vector&) const {
  throw std::logic_error("real evaluation not provided by this map");
}

DenseRealMap::DenseRealMap(Matrix a)
    : LinearMap(a.rows(), a.cols(), Field::Real), a_(std::move(a)) {
  if (!a_.allFinite()) throw std::invalid_argument("dense operator entries must be finite");
}

void DenseRealMap::eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const {
  out.noalias() = a_ * x;
}

void DenseRealMap::eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const {
  out.noalias() = a_.transpose() * y;
}

DenseComplexMap::DenseComplexMap(CMatrix a)
    : LinearMap(a.rows(), a.cols(), Field::Complex), a_(std::move(a)) {
  if (!a_.allFinite()) throw std::invalid_argument("dense operator entries must be finite");
}

void DenseComplexMap::eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const {
  out.noalias() = a_ * x.cast<std::complex<double>>();
}

void DenseComplexMap::eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const {
  out = (a_.adjoint() * y).real();
}

IdentityMap::IdentityMap(Index n) : LinearMap(n, n, Field::Real) {}

void IdentityMap::eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const {
  out = x;
}

void IdentityMap::eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const {
  out = y;
}

TransposedMap::TransposedMap(LinearMapPtr base)
    : LinearMap(base->cols(), base->rows(), Field::Real), base_(std::move(base)) {
  if (base_->field() != Field::Real)
    throw std::invalid_argument("transpose view requires a real-field map");
}

void TransposedMap::eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const {
  out = base_->adjoint_real(x);
}

void TransposedMap::eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const {
  out = base_->forward_real(y);
}

ComposedMap::ComposedMap(LinearMapPtr outer, LinearMapPtr inner)
    : LinearMap(outer->rows(), inner->cols(), outer->field()),
      outer_(std::move(outer)),
      inner_(std::move(inner)) {
  if (outer_->cols() != inner_->rows())
    throw DimensionError("compose: inner rows != outer cols");
  if (inner_->field() != Field::Real)
    throw std::invalid_argument("compose: inner map must be real-field");
}

void ComposedMap::eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const {
  out = outer_->forward(inner_->forward_real(x));
}

void ComposedMap::eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const {
  out = inner_->adjoint_real(outer_->adjoint(y));
}

void ComposedMap::eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const {
  out = outer_->forward_real(inner_->forward_real(x));
}

void ComposedMap::eval_adjoint_real(const Eigen::Ref<const Vector>& y, Vector& out) const {
  out = inner_->adjoint_real(outer_->adjoint_real(y));
}

LinearMapPtr dense_map(Matrix a) { return std::make_shared<DenseRealMap>(std::move(a)); }

LinearMapPtr dense_map(CMatrix a) { return std::make_shared<DenseComplexMap>(std::move(a)); }

LinearMapPtr compose(LinearMapPtr outer, LinearMapPtr inner) {
  return std::make_shared<ComposedMap>(std::move(outer), std::move(inner));
}

void SamplingMask::set(Index r, Index c, bool value) {
  auto& cell = sampled[static_cast<std::size_t>(r * width + c)];
  if (cell != static_cast<std::uint8_t>(value)) {
    count += value ? 1 : -1;
    cell = static_cast<std::uint8_t>(value);
  }
}

SamplingMask SamplingMask::empty(Index h, Index w) {
  if (h < 1 || w < 1) throw DimensionError("mask dimensions must be positive");
  SamplingMask m;
  m.height = h;
  m.width = w;
  m.sampled.assign(static_cast<std::size_t>(h * w), 0);
  m.count = 0;
  return m;
}

SamplingMask SamplingMask::full(Index h, Index w) {
  SamplingMask m = empty(h, w);
  m.sampled.assign(m.sampled.size(), 1);
  m.count = h * w;
  return m;
}

SamplingMask radial_mask(Index n, Index lines) {
  if (n < 2) throw DimensionError("radial mask side length must be >= 2");
  if (lines < 1 || lines > 2 * n)
    throw std::invalid_argument("radial mask needs 1 <= lines <= 2n");
  SamplingMask mask = SamplingMask::empty(n, n);
  const Index sweep = 2 * n;
  const double reach = static_cast<double>(n);
  for (Index line = 0; line < lines; ++line) {
    const double angle = std::numbers::pi * static_cast<double>(line) /
                         static_cast<double>(lines);
    const double dir_r = std::sin(angle);
    const double dir_c = std::cos(angle);
    for (Index s = 0; s < sweep; ++s) {
      // t covers [-n, n] in centered frequency coordinates, so every line
      // spans the whole grid; out-of-grid samples are dropped
      const double t = -reach + static_cast<double>(s) *
                                    (2.0 * reach / static_cast<double>(sweep - 1));
      const Index u = static_cast<Index>(std::lround(t * dir_r));
      const Index v = static_cast<Index>(std::lround(t * dir_c));
      if (u < -n / 2 || u >= n - n / 2 || v < -n / 2 || v >= n - n / 2) continue;
      mask.set((u + n) % n, (v + n) % n, true);
    }
  }
  mask.set(0, 0, true);  // DC
  return mask;
}

namespace {

// Unnormalized 2-D DFT over rows then columns; the inverse direction uses
// the conjugation identity so no hidden scaling is involved.
void dft2_unscaled(CMatrix& grid, bool inverse) {
  thread_local Eigen::FFT<double> fft;
  if (inverse) grid = grid.conjugate();
  CVector in, out;
  for (Index i = 0; i < grid.rows(); ++i) {
    in = grid.row(i).transpose();
    fft.fwd(out, in);
    grid.row(i) = out.transpose();
  }
  for (Index j = 0; j < grid.cols(); ++j) {
    in = grid.col(j);
    fft.fwd(out, in);
    grid.col(j) = out;
  }
  if (inverse) grid = grid.conjugate();
}

}  // namespace

PartialFourierMap::PartialFourierMap(SamplingMask mask)
    : LinearMap(mask.count, mask.height * mask.width, Field::Complex),
      mask_(std::move(mask)),
      scale_(1.0 / std::sqrt(static_cast<double>(mask_.height * mask_.width))) {
  if (mask_.count < 1) throw std::invalid_argument("partial Fourier mask is empty");
  cells_.reserve(static_cast<std::size_t>(mask_.count));
  for (Index r = 0; r < mask_.height; ++r)
    for (Index c = 0; c < mask_.width; ++c)
      if (mask_.at(r, c)) cells_.emplace_back(r, c);
}

void PartialFourierMap::eval_forward(const Eigen::Ref<const Vector>& x, CVector& out) const {
  const Index h = mask_.height, w = mask_.width;
  CMatrix grid(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c)
      grid(r, c) = std::complex<double>(x[r * w + c], 0.0);
  dft2_unscaled(grid, false);
  for (std::size_t i = 0; i < cells_.size(); ++i)
    out[static_cast<Index>(i)] = grid(cells_[i].first, cells_[i].second) * scale_;
}

void PartialFourierMap::eval_adjoint(const Eigen::Ref<const CVector>& y, Vector& out) const {
  const Index h = mask_.height, w = mask_.width;
  CMatrix grid = CMatrix::Zero(h, w);
  for (std::size_t i = 0; i < cells_.size(); ++i)
    grid(cells_[i].first, cells_[i].second) = y[static_cast<Index>(i)];
  dft2_unscaled(grid, true);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c)
      out[r * w + c] = grid(r, c).real() * scale_;
}

LinearMapPtr partial_fourier(SamplingMask mask) {
  return std::make_shared<PartialFourierMap>(std::move(mask));
}

const Matrix& AnalysisPair::dense_omega() const {
  if (!omega_dense)
    throw std::invalid_argument("operation requires a dense analysis operator");
  return *omega_dense;
}

AnalysisPair analysis_pair_from_dense(Matrix omega, Matrix synthesis,
                                      double frame_lower, double frame_upper) {
  if (omega.rows() != synthesis.cols() || omega.cols() != synthesis.rows())
    throw DimensionError("analysis pair: synthesis must be cols x rows of omega");
  AnalysisPair pair;
  pair.omega_dense = std::make_shared<Matrix>(omega);
  pair.omega = dense_map(std::move(omega));
  pair.synthesis = dense_map(std::move(synthesis));
  pair.frame_lower = frame_lower;
  pair.frame_upper = frame_upper;
  return pair;
}

AnalysisPair identity_pair(Index d) {
  AnalysisPair pair;
  auto id = std::make_shared<IdentityMap>(d);
  pair.omega = id;
  pair.synthesis = id;
  pair.omega_dense = std::make_shared<Matrix>(Matrix::Identity(d, d));
  return pair;
}

namespace {

class UndecimatedHaarAnalysis final : public LinearMap {
 public:
  UndecimatedHaarAnalysis(Index h, Index w)
      : LinearMap(4 * h * w, h * w, Field::Real), h_(h), w_(w) {}

 protected:
  void eval_forward_real(const Eigen::Ref<const Vector>& x, Vector& out) const override {
    const Index d = h_ * w_;
    for (Index i = 0; i < h_; ++i) {
      const Index i1 = (i + 1 == h_) ? 0 : i + 1;
      for (Index j = 0; j < w_; ++j) {
        const Index j1 = (j + 1 == w_) ? 0 : j + 1;
        const double x00 = x[i * w_ + j];
        const double x01 = x[i * w_ + j1];
        const double x10 = x[i1 * w_ + j];
        const double x11 = x[i1 * w_ + j1];
        const Index cell = i * w_ + j;
        out[cell] = 0.25 * (x00 + x01 + x10 + x11);            // LL
        out[d + cell] = 0.25 * (x00 - x01 + x10 - x11);        // LH
        out[2 * d + cell] = 0.25 * (x00 + x01 - x10 - x11);    // HL
        out[3 * d + cell] = 0.25 * (x00 - x01 - x10 + x11);    // HH
      }
    }
  }

  void eval_adjoint_real(const Eigen::Ref<const Vector>& w, Vector& out) const override {
    const Index d = h_ * w_;
    for (Index i = 0; i < h_; ++i) {
      const Index i0 = (i == 0) ? h_ - 1 : i - 1;
      for (Index j = 0; j < w_; ++j) {
        const Index j0 = (j == 0) ? w_ - 1 : j - 1;
        const Index c00 = i * w_ + j;    // stencil anchored here
        const Index c01 = i * w_ + j0;   // anchored one column back
        const Index c10 = i0 * w_ + j;   // one row back
        const Index c11 = i0 * w_ + j0;  // both
        double acc = w[c00] + w[c01] + w[c10] + w[c11];                      // LL
        acc += w[d + c00] - w[d + c01] + w[d + c10] - w[d + c11];            // LH
        acc += w[2 * d + c00] + w[2 * d + c01] - w[2 * d + c10] - w[2 * d + c11];  // HL
        acc += w[3 * d + c00] - w[3 * d + c01] - w[3 * d + c10] + w[3 * d + c11];  // HH
        out[i * w_ + j] = 0.25 * acc;
      }
    }
  }

 private:
  Index h_;
  Index w_;
};

}  // namespace

AnalysisPair undecimated_haar(Index height, Index width) {
  if (height < 2 || width < 2)
    throw DimensionError("undecimated Haar needs height, width >= 2");
  AnalysisPair pair;
  auto omega = std::make_shared<UndecimatedHaarAnalysis>(height, width);
  pair.omega = omega;
  pair.synthesis = std::make_shared<TransposedMap>(omega);
  pair.frame_lower = 1.0;
  pair.frame_upper = 1.0;
  return pair;
}

Matrix pseudo_inverse(const Matrix& omega) {
  if (omega.rows() < omega.cols())
    throw std::invalid_argument("pseudo_inverse expects p >= d");
  Eigen::BDCSVD<Matrix> svd(omega, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-12 * sv[0];
  if (sv[sv.size() - 1] <= cutoff)
    throw RankError("pseudo_inverse: matrix is rank-deficient");
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace cosparse
