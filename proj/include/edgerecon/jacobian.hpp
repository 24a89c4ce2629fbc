#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edgerecon/grid.hpp"
#include "edgerecon/matrix_prox.hpp"

namespace edgerecon {

// Per-pixel 2 x m Jacobian of an m-contrast image stack, stored as 2m grids
// v_{i,j} = D_i u_j in contrast-major order.
class JacobianField {
 public:
  JacobianField() = default;
  JacobianField(std::size_t rows, std::size_t cols, std::size_t contrasts);

  // Finite-difference Jacobian of the given images.
  static JacobianField of_images(std::span<const ComplexGrid> images);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t contrasts() const noexcept { return contrasts_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }

  ComplexGrid& component(Axis axis, std::size_t j) { return grids_[index(axis, j)]; }
  const ComplexGrid& component(Axis axis, std::size_t j) const { return grids_[index(axis, j)]; }

  std::span<ComplexGrid> grids() noexcept { return grids_; }
  std::span<const ComplexGrid> grids() const noexcept { return grids_; }

  // Real parts at one pixel, row i = axis i.
  PixelJacobian pixel(std::size_t p) const;
  void set_pixel(std::size_t p, const PixelJacobian& b);

  bool same_shape(const JacobianField& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_ && contrasts_ == other.contrasts_;
  }

  friend bool operator==(const JacobianField&, const JacobianField&) = default;

  static std::size_t index(Axis axis, std::size_t j) noexcept {
    return 2 * j + (axis == Axis::Rows ? 0 : 1);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t contrasts_ = 0;
  std::vector<ComplexGrid> grids_;
};

double field_norm(const JacobianField& v);
double field_distance(const JacobianField& a, const JacobianField& b);
bool field_is_real(const JacobianField& v);

// Sum over pixels of the matrix norm of the real 2 x m Jacobian.
double field_matrix_norm_sum(const JacobianField& v, MatrixNorm norm);

}  // namespace edgerecon
