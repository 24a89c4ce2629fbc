#include "edgerecon/jacobian.hpp"

#include <cmath>

#include "edgerecon/error.hpp"

namespace edgerecon {

JacobianField::JacobianField(std::size_t rows, std::size_t cols, std::size_t contrasts)
    : rows_(rows), cols_(cols), contrasts_(contrasts) {
  if (contrasts == 0) fail_invalid("Jacobian field needs at least one contrast");
  grids_.reserve(2 * contrasts);
  for (std::size_t k = 0; k < 2 * contrasts; ++k) grids_.emplace_back(rows, cols);
}

JacobianField JacobianField::of_images(std::span<const ComplexGrid> images) {
  if (images.empty()) fail_invalid("of_images: no images");
  JacobianField v(images[0].rows(), images[0].cols(), images.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (!images[j].same_shape(images[0])) fail_invalid("of_images: contrasts differ in shape");
    v.component(Axis::Rows, j) = finite_difference(images[j], Axis::Rows);
    v.component(Axis::Cols, j) = finite_difference(images[j], Axis::Cols);
  }
  return v;
}

PixelJacobian JacobianField::pixel(std::size_t p) const {
  PixelJacobian b(contrasts_);
  for (std::size_t j = 0; j < contrasts_; ++j) {
    b(0, j) = component(Axis::Rows, j)[p].real();
    b(1, j) = component(Axis::Cols, j)[p].real();
  }
  return b;
}

void JacobianField::set_pixel(std::size_t p, const PixelJacobian& b) {
  if (b.m() != contrasts_) fail_invalid("set_pixel: contrast count mismatch");
  for (std::size_t j = 0; j < contrasts_; ++j) {
    component(Axis::Rows, j)[p] = b(0, j);
    component(Axis::Cols, j)[p] = b(1, j);
  }
}

double field_norm(const JacobianField& v) {
  double s = 0.0;
  for (const ComplexGrid& g : v.grids()) {
    for (const cplx& z : g.values()) s += std::norm(z);
  }
  return std::sqrt(s);
}

double field_distance(const JacobianField& a, const JacobianField& b) {
  if (!a.same_shape(b)) fail_invalid("field_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.grids().size(); ++k) {
    const auto& ga = a.grids()[k];
    const auto& gb = b.grids()[k];
    for (std::size_t i = 0; i < ga.size(); ++i) s += std::norm(ga[i] - gb[i]);
  }
  return std::sqrt(s);
}

bool field_is_real(const JacobianField& v) {
  for (const ComplexGrid& g : v.grids()) {
    for (const cplx& z : g.values()) {
      if (z.imag() != 0.0) return false;
    }
  }
  return true;
}

double field_matrix_norm_sum(const JacobianField& v, MatrixNorm norm) {
  const std::size_t m = v.contrasts();
  std::vector<double> row0(m), row1(m);
  double total = 0.0;
  for (std::size_t p = 0; p < v.pixels(); ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      row0[j] = v.component(Axis::Rows, j)[p].real();
      row1[j] = v.component(Axis::Cols, j)[p].real();
    }
    total += norm_rows(norm, row0, row1);
  }
  return total;
}

}  // namespace edgerecon
