#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace edgerecon {

using cplx = std::complex<double>;

// Direction of a partial derivative. Rows differentiates along the row index
// (x1, vertical); Cols along the column index (x2, horizontal).
enum class Axis { Rows = 1, Cols = 2 };

Axis axis_from_int(int axis);

// Row-major 2D grid of complex samples: an image contrast or its spectrum.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(std::size_t rows, std::size_t cols);
  ComplexGrid(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static ComplexGrid from_real(std::size_t rows, std::size_t cols,
                               std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::span<cplx> values() noexcept { return data_; }
  std::span<const cplx> values() const noexcept { return data_; }

  bool same_shape(const ComplexGrid& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const ComplexGrid&, const ComplexGrid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

double frobenius_norm(const ComplexGrid& g);
double frobenius_distance(const ComplexGrid& a, const ComplexGrid& b);

// Binary indicator of acquired k-space locations in unshifted DFT order.
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> samples);

  static SamplingMask full(std::size_t rows, std::size_t cols);
  static SamplingMask empty(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return samples_.size(); }

  bool sampled(std::size_t r, std::size_t c) const { return samples_[r * cols_ + c] != 0; }
  bool sampled(std::size_t i) const { return samples_[i] != 0; }
  std::span<const std::uint8_t> samples() const noexcept { return samples_; }

  std::size_t count() const noexcept { return count_; }
  double ratio() const noexcept {
    return static_cast<double>(count_) / static_cast<double>(samples_.size());
  }

  bool matches(const ComplexGrid& g) const noexcept {
    return rows_ == g.rows() && cols_ == g.cols();
  }

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> samples_;
  std::size_t count_ = 0;
};

// Per-frequency symbol of the periodic forward difference along one axis.
struct DerivativeSpectrum {
  Axis axis = Axis::Rows;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> multipliers;

  const cplx& operator[](std::size_t i) const { return multipliers[i]; }
};

// Unitary 2D DFT, forward kernel exp(-2*pi*i*k*n/N), scale 1/sqrt(rows*cols).
ComplexGrid dft2(const ComplexGrid& g);
ComplexGrid idft2(const ComplexGrid& g);

// In-place variants; used by the solver to avoid reallocating per iteration.
void dft2_inplace(ComplexGrid& g);
void idft2_inplace(ComplexGrid& g);

DerivativeSpectrum derivative_spectrum(std::size_t rows, std::size_t cols, Axis axis);

// out[x] = g[x + 1 mod n] - g[x] along the axis.
ComplexGrid finite_difference(const ComplexGrid& g, Axis axis);

// Adjoint of finite_difference: out[x] = g[x - 1 mod n] - g[x].
ComplexGrid finite_difference_adjoint(const ComplexGrid& g, Axis axis);

ComplexGrid apply_mask(const ComplexGrid& spectrum, const SamplingMask& mask);

// Entrywise multiplier * spectrum.
ComplexGrid multiply(const DerivativeSpectrum& d, const ComplexGrid& spectrum);

}  // namespace edgerecon
