#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace edgerecon {

enum class MatrixNorm { Frobenius, Spectral, Nuclear };

MatrixNorm parse_matrix_norm(std::string_view name);  // "fro" | "spec" | "nuc"
std::string_view to_string(MatrixNorm norm);

// 2 x m real matrix of partial derivatives at one pixel, row-major.
class PixelJacobian {
 public:
  PixelJacobian() = default;
  explicit PixelJacobian(std::size_t m);
  PixelJacobian(std::span<const double> row0, std::span<const double> row1);

  std::size_t m() const noexcept { return m_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * m_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * m_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * m_, m_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * m_, m_}; }

  std::span<double> entries() noexcept { return entries_; }
  std::span<const double> entries() const noexcept { return entries_; }

  friend bool operator==(const PixelJacobian&, const PixelJacobian&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> entries_;
};

// Reduced SVD B = sum_i singulars[i] * left[i] * right[i]^T.
struct SmallSVD {
  std::array<std::array<double, 2>, 2> left{};  // left[i] is the i-th left vector
  std::array<double, 2> singulars{};            // descending, nonnegative
  std::array<std::vector<double>, 2> right;     // right[i] has length m
};

// Closed form from the 2x2 Gram matrix B B^T. Left vectors are signed so
// their first nonzero entry is nonnegative. Right vectors belonging to a zero
// singular value complete an orthonormal pair when m >= 2 and are zero when
// m == 1.
SmallSVD svd_2xm(const PixelJacobian& b);

double norm_frobenius(const PixelJacobian& b);
double norm_spectral(const PixelJacobian& b);
double norm_nuclear(const PixelJacobian& b);
double matrix_norm(MatrixNorm norm, const PixelJacobian& b);

// argmin_X alpha*||X|| + 0.5*||X - B||_F^2. Throws on alpha < 0.
PixelJacobian prox_frobenius(const PixelJacobian& b, double alpha);
PixelJacobian prox_spectral(const PixelJacobian& b, double alpha);
PixelJacobian prox_nuclear(const PixelJacobian& b, double alpha);
PixelJacobian prox(MatrixNorm norm, const PixelJacobian& b, double alpha);

// Allocation-free kernels over the two rows of a 2 x m block. The solver calls
// these once per pixel per iteration. alpha is assumed valid.
double norm_rows(MatrixNorm norm, std::span<const double> row0, std::span<const double> row1);
void prox_rows(MatrixNorm norm, std::span<double> row0, std::span<double> row1, double alpha);

// Shrinks a singular-value pair (s1 >= s2 >= 0) for the given norm.
std::array<double, 2> shrink_singulars(MatrixNorm norm, double s1, double s2, double alpha);

}  // namespace edgerecon
