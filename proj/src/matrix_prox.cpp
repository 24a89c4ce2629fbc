#include "edgerecon/matrix_prox.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "edgerecon/error.hpp"

namespace edgerecon {

MatrixNorm parse_matrix_norm(std::string_view name) {
  if (name == "fro" || name == "frobenius") return MatrixNorm::Frobenius;
  if (name == "spec" || name == "spectral") return MatrixNorm::Spectral;
  if (name == "nuc" || name == "nuclear") return MatrixNorm::Nuclear;
  fail_invalid("unknown matrix norm '" + std::string(name) + "' (expected fro|spec|nuc)");
}

std::string_view to_string(MatrixNorm norm) {
  switch (norm) {
    case MatrixNorm::Frobenius: return "fro";
    case MatrixNorm::Spectral: return "spec";
    case MatrixNorm::Nuclear: return "nuc";
  }
  return "fro";
}

PixelJacobian::PixelJacobian(std::size_t m) : m_(m), entries_(2 * m, 0.0) {
  if (m == 0) fail_invalid("pixel Jacobian needs at least one column");
}

PixelJacobian::PixelJacobian(std::span<const double> row0, std::span<const double> row1)
    : m_(row0.size()) {
  if (row0.empty() || row0.size() != row1.size()) {
    fail_invalid("pixel Jacobian rows must be nonempty and of equal length");
  }
  entries_.reserve(2 * m_);
  entries_.insert(entries_.end(), row0.begin(), row0.end());
  entries_.insert(entries_.end(), row1.begin(), row1.end());
}

namespace {

using Vec2 = std::array<double, 2>;

struct LeftFactor {
  Vec2 u1;
  Vec2 u2;
  double s1;
  double s2;
};

double project_norm(const Vec2& u, std::span<const double> row0, std::span<const double> row1) {
  double s = 0.0;
  for (std::size_t j = 0; j < row0.size(); ++j) {
    const double p = u[0] * row0[j] + u[1] * row1[j];
    s += p * p;
  }
  return std::sqrt(s);
}

// Left singular vectors from the eigenvectors of the Gram matrix; singular
// values from ||B^T u_i|| to keep the small one accurate.
LeftFactor left_factor(std::span<const double> row0, std::span<const double> row1) {
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t j = 0; j < row0.size(); ++j) {
    a += row0[j] * row0[j];
    b += row0[j] * row1[j];
    c += row1[j] * row1[j];
  }
  const double theta = 0.5 * std::atan2(2.0 * b, a - c);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  LeftFactor f;
  f.u1 = {cs, sn};
  f.u2 = {-sn, cs};
  if (f.u2[0] < 0.0 || (f.u2[0] == 0.0 && f.u2[1] < 0.0)) f.u2 = {sn, -cs};
  f.s1 = project_norm(f.u1, row0, row1);
  f.s2 = project_norm(f.u2, row0, row1);
  if (f.s2 > f.s1) {
    std::swap(f.u1, f.u2);
    std::swap(f.s1, f.s2);
  }
  return f;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    fail_invalid("shrinkage weight alpha must be finite and >= 0, got " + std::to_string(alpha));
  }
}

// Orthonormal vector in R^m orthogonal to `basis` (which has at most one
// entry), built by Gram-Schmidt on the least-aligned standard basis vector.
std::vector<double> complete_basis(std::size_t m, const std::vector<double>* basis) {
  std::vector<double> e(m, 0.0);
  std::size_t pick = 0;
  if (basis != nullptr) {
    double best = 2.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs((*basis)[k]) < best) {
        best = std::abs((*basis)[k]);
        pick = k;
      }
    }
  }
  e[pick] = 1.0;
  if (basis != nullptr) {
    const double d = (*basis)[pick];
    double nrm = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      e[k] -= d * (*basis)[k];
      nrm += e[k] * e[k];
    }
    nrm = std::sqrt(nrm);
    for (double& x : e) x /= nrm;
  }
  return e;
}

}  // namespace

SmallSVD svd_2xm(const PixelJacobian& b) {
  const std::size_t m = b.m();
  const auto row0 = b.row(0);
  const auto row1 = b.row(1);
  const LeftFactor f = left_factor(row0, row1);

  SmallSVD out;
  out.left = {f.u1, f.u2};

  auto project = [&](const Vec2& u) {
    std::vector<double> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = u[0] * row0[j] + u[1] * row1[j];
    return p;
  };
  auto norm_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  // Singular values below this fraction of the largest are rounding noise.
  constexpr double kRankTol = 1e-14;

  std::vector<double> p1 = project(f.u1);
  const double s1 = norm_of(p1);
  if (s1 == 0.0) {
    out.singulars = {0.0, 0.0};
    out.right[0] = complete_basis(m, nullptr);
    out.right[1] = m >= 2 ? complete_basis(m, &out.right[0]) : std::vector<double>(m, 0.0);
    return out;
  }
  for (double& x : p1) x /= s1;

  std::vector<double> p2 = project(f.u2);
  double overlap = 0.0;
  for (std::size_t j = 0; j < m; ++j) overlap += p1[j] * p2[j];
  for (std::size_t j = 0; j < m; ++j) p2[j] -= overlap * p1[j];
  double s2 = norm_of(p2);
  if (s2 <= kRankTol * s1) {
    s2 = 0.0;
    p2 = m >= 2 ? complete_basis(m, &p1) : std::vector<double>(m, 0.0);
  } else {
    for (double& x : p2) x /= s2;
  }
  out.singulars = {s1, s2};
  out.right = {std::move(p1), std::move(p2)};
  return out;
}

double norm_rows(MatrixNorm norm, std::span<const double> row0, std::span<const double> row1) {
  if (norm == MatrixNorm::Frobenius) {
    double s = 0.0;
    for (std::size_t j = 0; j < row0.size(); ++j) s += row0[j] * row0[j] + row1[j] * row1[j];
    return std::sqrt(s);
  }
  const LeftFactor f = left_factor(row0, row1);
  return norm == MatrixNorm::Spectral ? f.s1 : f.s1 + f.s2;
}

double norm_frobenius(const PixelJacobian& b) {
  return norm_rows(MatrixNorm::Frobenius, b.row(0), b.row(1));
}
double norm_spectral(const PixelJacobian& b) {
  return norm_rows(MatrixNorm::Spectral, b.row(0), b.row(1));
}
double norm_nuclear(const PixelJacobian& b) {
  return norm_rows(MatrixNorm::Nuclear, b.row(0), b.row(1));
}
double matrix_norm(MatrixNorm norm, const PixelJacobian& b) {
  return norm_rows(norm, b.row(0), b.row(1));
}

std::array<double, 2> shrink_singulars(MatrixNorm norm, double s1, double s2, double alpha) {
  switch (norm) {
    case MatrixNorm::Frobenius: {
      const double n = std::hypot(s1, s2);
      if (n <= alpha) return {0.0, 0.0};
      const double k = (n - alpha) / n;
      return {k * s1, k * s2};
    }
    case MatrixNorm::Spectral: {
      // prox of alpha*max(s1, s2): lower the top value until it meets the
      // second, then lower both together.
      if (s1 - s2 >= alpha) return {s1 - alpha, s2};
      const double level = 0.5 * (s1 + s2 - alpha);
      return level > 0.0 ? std::array<double, 2>{level, level} : std::array<double, 2>{0.0, 0.0};
    }
    case MatrixNorm::Nuclear:
      return {std::max(s1 - alpha, 0.0), std::max(s2 - alpha, 0.0)};
  }
  return {s1, s2};
}

void prox_rows(MatrixNorm norm, std::span<double> row0, std::span<double> row1, double alpha) {
  if (alpha == 0.0) return;
  const std::size_t m = row0.size();
  if (norm == MatrixNorm::Frobenius) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += row0[j] * row0[j] + row1[j] * row1[j];
    const double n = std::sqrt(s);
    const double k = n > alpha ? (n - alpha) / n : 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      row0[j] *= k;
      row1[j] *= k;
    }
    return;
  }

  const LeftFactor f = left_factor(row0, row1);
  const auto shrunk = shrink_singulars(norm, f.s1, f.s2, alpha);
  const double c1 = f.s1 > 0.0 ? shrunk[0] / f.s1 : 0.0;
  const double c2 = f.s2 > 0.0 ? shrunk[1] / f.s2 : 0.0;
  // X = (c1 u1 u1^T + c2 u2 u2^T) B
  const double m00 = c1 * f.u1[0] * f.u1[0] + c2 * f.u2[0] * f.u2[0];
  const double m01 = c1 * f.u1[0] * f.u1[1] + c2 * f.u2[0] * f.u2[1];
  const double m11 = c1 * f.u1[1] * f.u1[1] + c2 * f.u2[1] * f.u2[1];
  for (std::size_t j = 0; j < m; ++j) {
    const double x0 = row0[j];
    const double x1 = row1[j];
    row0[j] = m00 * x0 + m01 * x1;
    row1[j] = m01 * x0 + m11 * x1;
  }
}

PixelJacobian prox(MatrixNorm norm, const PixelJacobian& b, double alpha) {
  check_alpha(alpha);
  PixelJacobian x = b;
  prox_rows(norm, x.row(0), x.row(1), alpha);
  return x;
}

PixelJacobian prox_frobenius(const PixelJacobian& b, double alpha) {
  return prox(MatrixNorm::Frobenius, b, alpha);
}
PixelJacobian prox_spectral(const PixelJacobian& b, double alpha) {
  return prox(MatrixNorm::Spectral, b, alpha);
}
PixelJacobian prox_nuclear(const PixelJacobian& b, double alpha) {
  return prox(MatrixNorm::Nuclear, b, alpha);
}

}  // namespace edgerecon
