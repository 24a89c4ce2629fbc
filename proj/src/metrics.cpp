#include "edgerecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgerecon/error.hpp"

namespace edgerecon {

namespace {

void require_same_shape(const ComplexGrid& u, const ComplexGrid& reference, const char* what) {
  if (!u.same_shape(reference)) fail_invalid(std::string(what) + ": image shapes differ");
}

}  // namespace

double relative_error(const ComplexGrid& u, const ComplexGrid& reference) {
  require_same_shape(u, reference, "relative_error");
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    const double b = std::abs(reference[i]);
    diff += (a - b) * (a - b);
    ref += b * b;
  }
  if (ref == 0.0) fail_invalid("relative_error: reference image is zero");
  return std::sqrt(diff / ref);
}

double psnr(const ComplexGrid& u, const ComplexGrid& reference) {
  require_same_shape(u, reference, "psnr");
  double sq = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    const double b = std::abs(reference[i]);
    sq += (a - b) * (a - b);
    peak = std::max(peak, b);
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double rmse = std::sqrt(sq / static_cast<double>(u.size()));
  return 20.0 * std::log10(peak / rmse);
}

}  // namespace edgerecon
