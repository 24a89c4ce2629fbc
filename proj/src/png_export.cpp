#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"

namespace edgerecon {

namespace {

void write_gray(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                const std::vector<std::uint8_t>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(cols);
  image.height = static_cast<png_uint_32>(rows);
  image.format = PNG_FORMAT_GRAY;
  if (png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), static_cast<png_int_32>(cols),
                              nullptr) == 0) {
    const std::string reason = image.message;
    png_image_free(&image);
    fail_io("cannot write PNG " + path.string() + ": " + reason);
  }
}

std::uint8_t to_byte(double x) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L));
}

}  // namespace

void write_magnitude_png(const ComplexGrid& image, const std::filesystem::path& path) {
  std::vector<double> mag(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) mag[i] = std::abs(image[i]);
  const auto [lo, hi] = std::minmax_element(mag.begin(), mag.end());
  const double low = *lo;
  const double span = *hi - *lo;
  std::vector<std::uint8_t> pixels(image.size(), 0);
  if (span > 0.0) {
    for (std::size_t i = 0; i < mag.size(); ++i) pixels[i] = to_byte(255.0 * (mag[i] - low) / span);
  }
  write_gray(path, image.rows(), image.cols(), pixels);
}

void write_error_png(const ComplexGrid& image, const ComplexGrid& reference,
                     const std::filesystem::path& path) {
  if (!image.same_shape(reference)) fail_invalid("write_error_png: image shapes differ");
  std::vector<double> err(image.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    err[i] = std::abs(image[i]) - std::abs(reference[i]);
    peak = std::max(peak, std::abs(err[i]));
  }
  std::vector<std::uint8_t> pixels(image.size(), 128);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < err.size(); ++i) pixels[i] = to_byte(127.5 + 127.5 * err[i] / peak);
  }
  write_gray(path, image.rows(), image.cols(), pixels);
}

void write_mask_png(const SamplingMask& mask, const std::filesystem::path& path) {
  // Displayed with DC at the center.
  const std::size_t rows = mask.rows();
  const std::size_t cols = mask.cols();
  std::vector<std::uint8_t> pixels(mask.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t sr = (r + rows / 2) % rows;
      const std::size_t sc = (c + cols / 2) % cols;
      pixels[sr * cols + sc] = mask.sampled(r, c) ? 255 : 0;
    }
  }
  write_gray(path, rows, cols, pixels);
}

}  // namespace edgerecon
