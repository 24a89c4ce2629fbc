#include "doctest.h"

#include <cmath>
#include <random>

#include "edgerecon/error.hpp"
#include "edgerecon/matrix_prox.hpp"
#include "oracles.hpp"

using namespace edgerecon;

namespace {

PixelJacobian random_jacobian(std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  PixelJacobian b(m);
  for (double& x : b.entries()) x = n(rng);
  return b;
}

// B = s1 u1 v1^T + s2 u2 v2^T with a fixed rotation for u and v.
PixelJacobian with_singulars(double s1, double s2) {
  const double a = 0.3, c = std::cos(a), s = std::sin(a);
  const double v1[3] = {2 / 3.0, 2 / 3.0, 1 / 3.0};
  const double v2[3] = {-2 / 3.0, 1 / 3.0, 2 / 3.0};
  PixelJacobian b(3);
  for (std::size_t j = 0; j < 3; ++j) {
    b(0, j) = s1 * c * v1[j] - s2 * s * v2[j];
    b(1, j) = s1 * s * v1[j] + s2 * c * v2[j];
  }
  return b;
}

double max_entry_diff(const PixelJacobian& a, const PixelJacobian& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("norm names") {
  CHECK(parse_matrix_norm("fro") == MatrixNorm::Frobenius);
  CHECK(parse_matrix_norm("spec") == MatrixNorm::Spectral);
  CHECK(parse_matrix_norm("nuc") == MatrixNorm::Nuclear);
  CHECK_THROWS_AS(parse_matrix_norm("max"), Error);
  for (MatrixNorm n : {MatrixNorm::Frobenius, MatrixNorm::Spectral, MatrixNorm::Nuclear}) {
    CHECK(parse_matrix_norm(to_string(n)) == n);
  }
}

TEST_CASE("svd of small matrices against the quadratic-formula oracle") {
  std::mt19937_64 rng(21);
  for (std::size_t m : {1, 2, 3, 5}) {
    for (int t = 0; t < 200; ++t) {
      const PixelJacobian b = random_jacobian(m, rng);
      const SmallSVD svd = svd_2xm(b);
      const auto s = oracle::singular_values_quadratic(oracle::to_eigen(b));
      CHECK(svd.singulars[0] >= svd.singulars[1]);
      CHECK(svd.singulars[1] >= 0.0);
      CHECK(std::abs(svd.singulars[0] - s[0]) < 1e-12 * (1 + s[0]));
      CHECK(std::abs(svd.singulars[1] - s[1]) < 1e-7 * (1 + s[0]));
      // reconstruction and orthonormality
      PixelJacobian r(m);
      for (int k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < m; ++j)
            r(i, j) += svd.singulars[k] * svd.left[k][i] * svd.right[k][j];
      CHECK(max_entry_diff(r, b) < 1e-12);
      const double uu = svd.left[0][0] * svd.left[1][0] + svd.left[0][1] * svd.left[1][1];
      CHECK(std::abs(uu) < 1e-12);
      if (m >= 2) {
        double vv = 0, n0 = 0, n1 = 0;
        for (std::size_t j = 0; j < m; ++j) {
          vv += svd.right[0][j] * svd.right[1][j];
          n0 += svd.right[0][j] * svd.right[0][j];
          n1 += svd.right[1][j] * svd.right[1][j];
        }
        CHECK(std::abs(vv) < 1e-10);
        CHECK(std::abs(n0 - 1) < 1e-10);
        CHECK(std::abs(n1 - 1) < 1e-10);
      }
    }
  }
}

TEST_CASE("svd of the zero matrix") {
  const SmallSVD svd = svd_2xm(PixelJacobian(3));
  CHECK(svd.singulars[0] == 0.0);
  CHECK(svd.singulars[1] == 0.0);
  CHECK(svd.left[0][0] == 1.0);
  CHECK(svd.left[1][1] == 1.0);
}

TEST_CASE("norms match Eigen and respect the ordering chain") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const PixelJacobian b = random_jacobian(3, rng, 2.0);
    const auto e = oracle::to_eigen(b);
    const double f = norm_frobenius(b), s = norm_spectral(b), n = norm_nuclear(b);
    CHECK(std::abs(f - e.norm()) < 1e-12);
    CHECK(std::abs(s - oracle::norm_of(MatrixNorm::Spectral, e)) < 1e-12);
    CHECK(std::abs(n - oracle::norm_of(MatrixNorm::Nuclear, e)) < 1e-7);
    CHECK(s <= f + 1e-12);
    CHECK(f <= n + 1e-12);
    CHECK(matrix_norm(MatrixNorm::Frobenius, b) == f);
    CHECK(norm_rows(MatrixNorm::Nuclear, b.row(0), b.row(1)) == doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("prox worked examples") {
  PixelJacobian b(3);
  b(0, 0) = 3;
  b(1, 0) = 4;
  PixelJacobian expect(3);
  expect(0, 0) = 1.8;
  expect(1, 0) = 2.4;
  CHECK(max_entry_diff(prox_frobenius(b, 2), expect) < 1e-14);
  CHECK(max_entry_diff(prox_spectral(b, 2), expect) < 1e-14);
  CHECK(max_entry_diff(prox_nuclear(b, 2), expect) < 1e-14);

  const SmallSVD spec = svd_2xm(prox_spectral(with_singulars(5, 1), 2));
  CHECK(spec.singulars[0] == doctest::Approx(3).epsilon(1e-12));
  CHECK(spec.singulars[1] == doctest::Approx(1).epsilon(1e-12));
  const SmallSVD nuc = svd_2xm(prox_nuclear(with_singulars(3, 1), 1));
  CHECK(nuc.singulars[0] == doctest::Approx(2).epsilon(1e-12));
  CHECK(nuc.singulars[1] < 1e-7);
}

TEST_CASE("prox trivial cases") {
  std::mt19937_64 rng(9);
  for (MatrixNorm n : {MatrixNorm::Frobenius, MatrixNorm::Spectral, MatrixNorm::Nuclear}) {
    const PixelJacobian b = random_jacobian(3, rng);
    CHECK(prox(n, b, 0.0) == b);
    // the prox vanishes once alpha reaches the dual norm of B
    const double kill = oracle::dual_norm_of(n, oracle::to_eigen(b));
    const PixelJacobian z = prox(n, b, kill + 1e-9);
    for (double x : z.entries()) CHECK(std::abs(x) < 1e-12);
    CHECK_THROWS_AS(prox(n, b, -1.0), Error);
    CHECK_THROWS_AS(prox(n, b, std::nan("")), Error);
  }
}

TEST_CASE("degenerate spectral prox shrinks singular values jointly") {
  // s1 - s2 < alpha: the naive formula would order the singular values wrongly
  const PixelJacobian b = with_singulars(3, 2.5);
  const SmallSVD out = svd_2xm(prox_spectral(b, 2));
  CHECK(out.singulars[0] == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(out.singulars[1] == doctest::Approx(1.75).epsilon(1e-12));
  const auto s = shrink_singulars(MatrixNorm::Spectral, 1.0, 0.5, 4.0);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
}

TEST_CASE("prox satisfies the optimality certificate") {
  std::mt19937_64 rng(77);
  for (MatrixNorm n : {MatrixNorm::Frobenius, MatrixNorm::Spectral, MatrixNorm::Nuclear}) {
    for (std::size_t m : {1, 2, 3, 4}) {
      for (int t = 0; t < 200; ++t) {
        const PixelJacobian b = random_jacobian(m, rng, 2.0);
        const double alpha = std::exp(std::uniform_real_distribution<double>(-3, 2)(rng));
        const PixelJacobian x = prox(n, b, alpha);
        const auto cert =
            oracle::prox_certificate(n, oracle::to_eigen(x), oracle::to_eigen(b), alpha);
        CHECK(cert.dual_excess < 1e-9);
        CHECK(cert.gap < 1e-9);
      }
    }
  }
}

TEST_CASE("prox beats the brute-force minimizer") {
  std::mt19937_64 rng(123);
  for (MatrixNorm n : {MatrixNorm::Frobenius, MatrixNorm::Spectral, MatrixNorm::Nuclear}) {
    for (int t = 0; t < 40; ++t) {
      const PixelJacobian b = random_jacobian(3, rng, 2.0);
      const double alpha = std::array{0.1, 1.0, 5.0}[t % 3];
      const auto eb = oracle::to_eigen(b);
      const double closed = oracle::prox_objective(n, oracle::to_eigen(prox(n, b, alpha)), eb, alpha);
      const double brute = oracle::prox_objective(n, oracle::brute_force_prox(n, eb, alpha, rng), eb, alpha);
      CHECK(closed <= brute + 1e-8);
    }
  }
}

TEST_CASE("row kernels agree with the value API") {
  std::mt19937_64 rng(31);
  for (MatrixNorm n : {MatrixNorm::Frobenius, MatrixNorm::Spectral, MatrixNorm::Nuclear}) {
    for (int t = 0; t < 100; ++t) {
      PixelJacobian b = random_jacobian(3, rng);
      const PixelJacobian x = prox(n, b, 0.7);
      prox_rows(n, b.row(0), b.row(1), 0.7);
      CHECK(max_entry_diff(b, x) < 1e-14);
    }
  }
}
