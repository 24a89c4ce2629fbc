#include "edgerecon/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "edgerecon/error.hpp"

namespace edgerecon {

Axis axis_from_int(int axis) {
  if (axis == 1) return Axis::Rows;
  if (axis == 2) return Axis::Cols;
  fail_invalid("invalid axis " + std::to_string(axis) + " (expected 1 or 2)");
}

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) {
    fail_invalid("grid must be at least 2x2, got " + std::to_string(rows) + "x" +
                 std::to_string(cols));
  }
}

}  // namespace

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  check_dims(rows, cols);
}

ComplexGrid::ComplexGrid(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_dims(rows, cols);
  if (data_.size() != rows * cols) {
    fail_invalid("grid data length " + std::to_string(data_.size()) +
                 " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexGrid ComplexGrid::from_real(std::size_t rows, std::size_t cols,
                                   std::span<const double> values) {
  if (values.size() != rows * cols) fail_invalid("real data length does not match grid shape");
  std::vector<cplx> data(values.begin(), values.end());
  return ComplexGrid(rows, cols, std::move(data));
}

double frobenius_norm(const ComplexGrid& g) {
  double s = 0.0;
  for (const cplx& z : g.values()) s += std::norm(z);
  return std::sqrt(s);
}

double frobenius_distance(const ComplexGrid& a, const ComplexGrid& b) {
  if (!a.same_shape(b)) fail_invalid("frobenius_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

SamplingMask::SamplingMask(std::size_t rows, std::size_t cols,
                           std::vector<std::uint8_t> samples)
    : rows_(rows), cols_(cols), samples_(std::move(samples)) {
  check_dims(rows, cols);
  if (samples_.size() != rows * cols) fail_invalid("mask length does not match its shape");
  for (std::uint8_t s : samples_) {
    if (s > 1) fail_invalid("mask values must be 0 or 1");
    count_ += s;
  }
}

SamplingMask SamplingMask::full(std::size_t rows, std::size_t cols) {
  return SamplingMask(rows, cols, std::vector<std::uint8_t>(rows * cols, 1));
}

SamplingMask SamplingMask::empty(std::size_t rows, std::size_t cols) {
  return SamplingMask(rows, cols, std::vector<std::uint8_t>(rows * cols, 0));
}

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plans] : plans_) {
      fftw_destroy_plan(plans.first);
      fftw_destroy_plan(plans.second);
    }
  }

  std::pair<fftw_plan, fftw_plan> get(std::size_t rows, std::size_t cols) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(rows, cols);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(rows * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int r = static_cast<int>(rows);
    const int c = static_cast<int>(cols);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan fwd = fftw_plan_dft_2d(r, c, buf, buf, FFTW_FORWARD, flags);
    fftw_plan bwd = fftw_plan_dft_2d(r, c, buf, buf, FFTW_BACKWARD, flags);
    if (fwd == nullptr || bwd == nullptr) fail_numerical("FFTW failed to create a plan");
    return plans_.emplace(key, std::make_pair(fwd, bwd)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<fftw_plan, fftw_plan>> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void transform(ComplexGrid& g, bool forward) {
  auto [fwd, bwd] = plan_cache().get(g.rows(), g.cols());
  auto* buf = reinterpret_cast<fftw_complex*>(g.values().data());
  fftw_execute_dft(forward ? fwd : bwd, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (cplx& z : g.values()) z *= scale;
}

}  // namespace

void dft2_inplace(ComplexGrid& g) { transform(g, true); }
void idft2_inplace(ComplexGrid& g) { transform(g, false); }

ComplexGrid dft2(const ComplexGrid& g) {
  ComplexGrid out = g;
  dft2_inplace(out);
  return out;
}

ComplexGrid idft2(const ComplexGrid& g) {
  ComplexGrid out = g;
  idft2_inplace(out);
  return out;
}

DerivativeSpectrum derivative_spectrum(std::size_t rows, std::size_t cols, Axis axis) {
  check_dims(rows, cols);
  const std::size_t n = axis == Axis::Rows ? rows : cols;
  // exp(2*pi*i*k/n) - 1, with the real part written as -2 sin^2 to keep
  // small frequencies accurate.
  std::vector<cplx> symbol(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double half = std::sin(0.5 * theta);
    symbol[k] = cplx(-2.0 * half * half, std::sin(theta));
  }
  symbol[0] = cplx(0.0, 0.0);
  if (n % 2 == 0) symbol[n / 2] = cplx(-2.0, 0.0);

  DerivativeSpectrum d{axis, rows, cols, std::vector<cplx>(rows * cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      d.multipliers[r * cols + c] = symbol[axis == Axis::Rows ? r : c];
    }
  }
  return d;
}

ComplexGrid finite_difference(const ComplexGrid& g, Axis axis) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  ComplexGrid out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const cplx next = axis == Axis::Rows ? g((r + 1) % rows, c) : g(r, (c + 1) % cols);
      out(r, c) = next - g(r, c);
    }
  }
  return out;
}

ComplexGrid finite_difference_adjoint(const ComplexGrid& g, Axis axis) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  ComplexGrid out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const cplx prev =
          axis == Axis::Rows ? g((r + rows - 1) % rows, c) : g(r, (c + cols - 1) % cols);
      out(r, c) = prev - g(r, c);
    }
  }
  return out;
}

ComplexGrid apply_mask(const ComplexGrid& spectrum, const SamplingMask& mask) {
  if (!mask.matches(spectrum)) fail_invalid("apply_mask: mask shape does not match grid");
  ComplexGrid out(spectrum.rows(), spectrum.cols());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (mask.sampled(i)) out[i] = spectrum[i];
  }
  return out;
}

ComplexGrid multiply(const DerivativeSpectrum& d, const ComplexGrid& spectrum) {
  if (d.rows != spectrum.rows() || d.cols != spectrum.cols()) {
    fail_invalid("derivative spectrum shape does not match grid");
  }
  ComplexGrid out(spectrum.rows(), spectrum.cols());
  for (std::size_t i = 0; i < spectrum.size(); ++i) out[i] = d[i] * spectrum[i];
  return out;
}

}  // namespace edgerecon
