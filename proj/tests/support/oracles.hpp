// Reference implementations for tests. Nothing here calls into the library
// under test beyond its value types.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "edgerecon/grid.hpp"
#include "edgerecon/matrix_prox.hpp"

namespace oracle {

using edgerecon::Axis;
using edgerecon::ComplexGrid;
using edgerecon::cplx;
using edgerecon::MatrixNorm;
using edgerecon::PixelJacobian;

// Unitary DFT by direct summation; the twiddle index is reduced mod n so the
// phase is exact up to one sin/cos evaluation.
inline ComplexGrid direct_dft2(const ComplexGrid& g, bool inverse = false) {
  const std::size_t R = g.rows(), C = g.cols();
  const double sign = inverse ? 1.0 : -1.0;
  auto twiddle = [sign](std::size_t k, std::size_t n, std::size_t len) {
    const double a = sign * 2.0 * std::numbers::pi * static_cast<double>((k * n) % len) /
                     static_cast<double>(len);
    return cplx(std::cos(a), std::sin(a));
  };
  ComplexGrid tmp(R, C), out(R, C);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t kc = 0; kc < C; ++kc) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < C; ++c) s += g(r, c) * twiddle(kc, c, C);
      tmp(r, kc) = s;
    }
  const double scale = 1.0 / std::sqrt(static_cast<double>(R * C));
  for (std::size_t kr = 0; kr < R; ++kr)
    for (std::size_t kc = 0; kc < C; ++kc) {
      cplx s = 0.0;
      for (std::size_t r = 0; r < R; ++r) s += tmp(r, kc) * twiddle(kr, r, R);
      out(kr, kc) = s * scale;
    }
  return out;
}

// Periodic forward difference written out pixel by pixel.
inline ComplexGrid pixel_difference(const ComplexGrid& g, Axis axis) {
  ComplexGrid out(g.rows(), g.cols());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const std::size_t r1 = axis == Axis::Rows ? (r + 1) % g.rows() : r;
      const std::size_t c1 = axis == Axis::Cols ? (c + 1) % g.cols() : c;
      out(r, c) = g(r1, c1) - g(r, c);
    }
  return out;
}

inline ComplexGrid random_grid(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                               bool complex = true) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexGrid g(rows, cols);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = cplx(n(rng), complex ? n(rng) : 0.0);
  return g;
}

inline double max_abs_diff(const ComplexGrid& a, const ComplexGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---- small matrices ---------------------------------------------------------

// fixed-capacity storage keeps the brute-force loops off the heap
using Mat = Eigen::Matrix<double, 2, Eigen::Dynamic, 0, 2, 8>;

inline Mat to_eigen(const PixelJacobian& b) {
  Mat m(2, static_cast<Eigen::Index>(b.m()));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < b.m(); ++j) m(i, j) = b(i, j);
  return m;
}

inline PixelJacobian from_eigen(const Mat& m) {
  PixelJacobian b(static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < b.m(); ++j) b(i, j) = m(i, j);
  return b;
}

// Singular values of a 2 x m matrix from the eigenvalues of B B^T by the
// quadratic formula.
inline std::array<double, 2> singular_values_quadratic(const Mat& b) {
  const Mat g = b * b.transpose();
  const double tr = g(0, 0) + g(1, 1);
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double l1 = tr / 2.0 + disc;
  const double l2 = std::max(0.0, tr / 2.0 - disc);
  return {std::sqrt(l1), std::sqrt(l2)};
}

// Eigen's SVD runs on the m x 2 transpose, x^T = V S U^T.
using Tall = Eigen::Matrix<double, Eigen::Dynamic, 2, 0, 8, 2>;

inline double norm_of(MatrixNorm norm, const Mat& x) {
  if (norm == MatrixNorm::Frobenius) return x.norm();
  const Tall xt = x.transpose();
  const auto s = Eigen::JacobiSVD<Tall>(xt).singularValues();
  if (norm == MatrixNorm::Spectral) return s.size() > 0 ? s(0) : 0.0;
  return s.sum();
}

// Dual norm: Frobenius is self-dual, spectral and nuclear are dual to each other.
inline double dual_norm_of(MatrixNorm norm, const Mat& x) {
  switch (norm) {
    case MatrixNorm::Frobenius: return norm_of(MatrixNorm::Frobenius, x);
    case MatrixNorm::Spectral: return norm_of(MatrixNorm::Nuclear, x);
    case MatrixNorm::Nuclear: return norm_of(MatrixNorm::Spectral, x);
  }
  return 0.0;
}

// One element of the subdifferential of the norm at x.
inline Mat norm_subgradient(MatrixNorm norm, const Mat& x) {
  Mat g = Mat::Zero(x.rows(), x.cols());
  if (norm == MatrixNorm::Frobenius) {
    const double n = x.norm();
    if (n > 0.0) g = x / n;
    return g;
  }
  const Tall xt = x.transpose();
  Eigen::JacobiSVD<Tall> svd(xt, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Tall v = svd.matrixU().leftCols(s.size());  // right vectors of x
  const Eigen::Matrix2d u = svd.matrixV();
  if (norm == MatrixNorm::Spectral) {
    if (s(0) > 0.0) g = u.col(0) * v.col(0).transpose();
    return g;
  }
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-300) g += u.col(i) * v.col(i).transpose();
  }
  return g;
}

inline double prox_objective(MatrixNorm norm, const Mat& x, const Mat& b, double alpha) {
  return alpha * norm_of(norm, x) + 0.5 * (x - b).squaredNorm();
}

// Brute-force minimizer of alpha ||X|| + 1/2 ||X - B||^2: subgradient descent
// with steps 1/(k+1) (the objective is 1-strongly convex) from several starts,
// then a compass search on the best point until the step falls below 1e-12.
inline Mat brute_force_prox(MatrixNorm norm, const Mat& b, double alpha, std::mt19937_64& rng,
                            int starts = 4, int iters = 4000) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat best = b;
  double best_f = prox_objective(norm, b, b, alpha);
  auto consider = [&](const Mat& x) {
    const double f = prox_objective(norm, x, b, alpha);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  };
  consider(Mat::Zero(b.rows(), b.cols()));
  for (int s = 0; s < starts; ++s) {
    Mat x = b;
    if (s > 0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] += n(rng) * (1.0 + b.norm());
    }
    for (int k = 0; k < iters; ++k) {
      const Mat g = alpha * norm_subgradient(norm, x) + (x - b);
      x -= g / static_cast<double>(k + 1);
      consider(x);
    }
  }
  double step = 0.1 * (1.0 + b.norm());
  Mat x = best;
  while (step > 1e-12) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        Mat y = x;
        y.data()[i] += dir * step;
        const double f = prox_objective(norm, y, b, alpha);
        if (f < best_f) {
          best_f = f;
          best = y;
          x = y;
          improved = true;
        }
      }
    }
    // also probe the shrink/grow direction through the origin, which the
    // coordinate moves resolve poorly near low-rank kinks
    for (double dir : {1.0, -1.0}) {
      Mat y = x * (1.0 + dir * step / (1.0 + x.norm()));
      const double f = prox_objective(norm, y, b, alpha);
      if (f < best_f) {
        best_f = f;
        best = y;
        x = y;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

// Residual of the optimality conditions of X = prox(B): with R = B - X,
//   dual(R) <= alpha  and  <R, X> = alpha ||X||.
struct Certificate {
  double dual_excess;  // max(0, dual(R) - alpha)
  double gap;          // |<R, X> - alpha ||X|||
};

inline Certificate prox_certificate(MatrixNorm norm, const Mat& x, const Mat& b, double alpha) {
  const Mat r = b - x;
  return {std::max(0.0, dual_norm_of(norm, r) - alpha),
          std::abs((r.array() * x.array()).sum() - alpha * norm_of(norm, x))};
}

}  // namespace oracle
