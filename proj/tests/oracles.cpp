#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cosparse::oracles {

ThresholdRef stable_sort_threshold(const Vector& w, Index k) {
  std::vector<Index> order(static_cast<std::size_t>(w.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(w[a]) > std::abs(w[b]);
  });
  ThresholdRef ref;
  ref.support.assign(order.begin(), order.begin() + k);
  std::sort(ref.support.begin(), ref.support.end());
  ref.thresholded = Vector::Zero(w.size());
  for (Index i : ref.support) ref.thresholded[i] = w[i];
  return ref;
}

Vector normal_equations_project(const Vector& z, const std::vector<Index>& cosupport,
                                const Matrix& omega) {
  if (cosupport.empty()) return z;
  Matrix rows(static_cast<Index>(cosupport.size()), omega.cols());
  for (std::size_t i = 0; i < cosupport.size(); ++i)
    rows.row(static_cast<Index>(i)) = omega.row(cosupport[i]);
  const Matrix gram = rows * rows.transpose();
  const Vector rhs = rows * z;
  const Vector multipliers = gram.ldlt().solve(rhs);
  return z - rows.transpose() * multipliers;
}

CMatrix direct_dft2(const Matrix& grid) {
  const Index h = grid.rows(), w = grid.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  CMatrix out(h, w);
  for (Index fr = 0; fr < h; ++fr)
    for (Index fc = 0; fc < w; ++fc) {
      std::complex<double> acc = 0.0;
      for (Index r = 0; r < h; ++r)
        for (Index c = 0; c < w; ++c) {
          const double phase =
              -2.0 * std::numbers::pi *
              (static_cast<double>(fr * r) / static_cast<double>(h) +
               static_cast<double>(fc * c) / static_cast<double>(w));
          acc += grid(r, c) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
      out(fr, fc) = acc * scale;
    }
  return out;
}

double rip_by_singular_values(const Matrix& m, Index k) {
  const Index n = m.cols();
  std::vector<Index> support(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
  double delta = 0.0;
  for (;;) {
    Matrix sub(m.rows(), k);
    for (Index i = 0; i < k; ++i) sub.col(i) = m.col(support[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<Matrix> svd(sub);
    const double top = svd.singularValues()[0];
    const double bottom = svd.singularValues()[svd.singularValues().size() - 1];
    delta = std::max({delta, top * top - 1.0, 1.0 - bottom * bottom});
    Index i = k - 1;
    while (i >= 0 && support[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++support[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
  }
  return delta;
}

namespace {

Vector keep_largest(const Vector& w, Index k) {
  return stable_sort_threshold(w, k).thresholded;
}

}  // namespace

std::vector<Vector> tdiht_straightline(const CMatrix& m, const Matrix& omega,
                                       const Matrix& synthesis, const CVector& y,
                                       Index k, double mu, int iterations) {
  std::vector<Vector> iterates;
  Vector w = Vector::Zero(omega.rows());
  for (int t = 0; t < iterations; ++t) {
    const Vector xs = synthesis * w;
    const CVector resid = y - m * xs.cast<std::complex<double>>();
    const Vector grad = (m.adjoint() * resid).real();
    const Vector w_g = omega * xs + mu * (omega * grad);
    w = keep_largest(w_g, k);
    iterates.push_back(w);
  }
  return iterates;
}

std::vector<Vector> iht_straightline(const CMatrix& m, const Matrix& synthesis,
                                     const CVector& y, Index k, double mu,
                                     int iterations) {
  const CMatrix a = m * synthesis.cast<std::complex<double>>();
  std::vector<Vector> iterates;
  Vector alpha = Vector::Zero(a.cols());
  for (int t = 0; t < iterations; ++t) {
    const CVector resid = y - a * alpha.cast<std::complex<double>>();
    const Vector grad = (a.adjoint() * resid).real();
    alpha = keep_largest(alpha + mu * grad, k);
    iterates.push_back(alpha);
  }
  return iterates;
}

std::vector<Vector> aiht_straightline(const CMatrix& m, const Matrix& omega,
                                      const CVector& y, Index ell, double mu,
                                      int iterations) {
  std::vector<Vector> iterates;
  Vector x = Vector::Zero(omega.cols());
  const Index p = omega.rows();
  for (int t = 0; t < iterations; ++t) {
    const CVector resid = y - m * x.cast<std::complex<double>>();
    const Vector x_g = x + mu * (m.adjoint() * resid).real();
    // ell smallest of |omega x_g|: complement of the keep set, ties toward
    // the highest index
    const Vector coeffs = omega * x_g;
    ThresholdRef keep = stable_sort_threshold(coeffs, p - ell);
    std::vector<Index> cosupport;
    std::size_t cursor = 0;
    for (Index i = 0; i < p; ++i) {
      if (cursor < keep.support.size() && keep.support[cursor] == i)
        ++cursor;
      else
        cosupport.push_back(i);
    }
    x = normal_equations_project(x_g, cosupport, omega);
    iterates.push_back(x);
  }
  return iterates;
}

Matrix shepp_logan_reference(Index n) {
  // value, half axes, center, rotation; same table as the library but an
  // independent evaluation path (explicit rotation matrices)
  const double table[10][6] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
      {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
      {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
      {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.605, 0.0},
      {0.1, 0.023, 0.046, 0.06, -0.605, 0.0}};
  Matrix image = Matrix::Zero(n, n);
  Eigen::Matrix2d rotations[10];
  for (int e = 0; e < 10; ++e) {
    const double phi = table[e][5] * std::numbers::pi / 180.0;
    rotations[e] << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double y = 1.0 - (static_cast<double>(i) + 0.5) * 2.0 / static_cast<double>(n);
      const double x = (static_cast<double>(j) + 0.5) * 2.0 / static_cast<double>(n) - 1.0;
      double value = 0.0;
      for (int e = 0; e < 10; ++e) {
        const Eigen::Vector2d local =
            rotations[e] * Eigen::Vector2d(x - table[e][3], y - table[e][4]);
        const double qa = local[0] / table[e][1];
        const double qb = local[1] / table[e][2];
        if (qa * qa + qb * qb <= 1.0) value += table[e][0];
      }
      image(i, j) = std::min(1.0, std::max(0.0, value));
    }
  return image;
}

}  // namespace cosparse::oracles
