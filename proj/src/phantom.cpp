#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "edgerecon/error.hpp"
#include "edgerecon/scene.hpp"

namespace edgerecon {

namespace {

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

// Additive intensities per ellipse for three contrasts. Table 0 is the
// modified (Toft) Shepp-Logan with the ventricles raised off zero; table 1
// inverts the tissue ordering (bright fluid); table 2 compresses it. Every
// entry is nonzero so every ellipse boundary is an edge in every contrast.
constexpr double kSheppLoganTables[3][10] = {
    {1.00, -0.80, -0.10, -0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10},
    {0.25, 0.30, 0.40, 0.40, -0.20, -0.20, -0.20, -0.20, -0.20, -0.20},
    {0.60, 0.15, 0.10, 0.10, 0.20, 0.20, 0.20, 0.20, 0.20, 0.20},
};

struct Geometry {
  double cx, cy, a, b, angle;
};

constexpr Geometry kSheppLoganGeometry[10] = {
    {0.00, 0.0000, 0.6900, 0.9200, 0.0},      {0.00, -0.0184, 0.6624, 0.8740, 0.0},
    {0.22, 0.0000, 0.1100, 0.3100, deg(-18)}, {-0.22, 0.0000, 0.1600, 0.4100, deg(18)},
    {0.00, 0.3500, 0.2100, 0.2500, 0.0},      {0.00, 0.1000, 0.0460, 0.0460, 0.0},
    {0.00, -0.1000, 0.0460, 0.0460, 0.0},     {-0.08, -0.6050, 0.0460, 0.0230, 0.0},
    {0.00, -0.6060, 0.0230, 0.0230, 0.0},     {0.06, -0.6050, 0.0230, 0.0460, 0.0},
};

bool inside(const EllipseSpec& e, double x, double y) {
  const double dx = x - e.cx;
  const double dy = y - e.cy;
  const double c = std::cos(e.angle);
  const double s = std::sin(e.angle);
  const double u = (dx * c + dy * s) / e.a;
  const double v = (-dx * s + dy * c) / e.b;
  return u * u + v * v <= 1.0;
}

void require_contrasts(std::size_t contrasts) {
  if (contrasts == 0) fail_invalid("phantom needs at least one contrast");
}

}  // namespace

std::vector<EllipseSpec> shepp_logan_ellipses() {
  std::vector<EllipseSpec> out;
  for (std::size_t k = 0; k < 10; ++k) {
    const Geometry& g = kSheppLoganGeometry[k];
    EllipseSpec e{g.cx, g.cy, g.a, g.b, g.angle, {}};
    for (const auto& table : kSheppLoganTables) e.intensities.push_back(table[k]);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ComplexGrid> rasterize_ellipses(std::size_t rows, std::size_t cols,
                                            const std::vector<EllipseSpec>& ellipses,
                                            std::size_t contrasts) {
  require_contrasts(contrasts);
  for (const EllipseSpec& e : ellipses) {
    if (!(e.a > 0.0) || !(e.b > 0.0)) fail_invalid("ellipse semi-axes must be positive");
    if (e.intensities.empty()) fail_invalid("ellipse has no intensities");
    for (double x : e.intensities) {
      if (!std::isfinite(x)) fail_invalid("ellipse intensity is not finite");
    }
  }
  std::vector<ComplexGrid> out;
  for (std::size_t j = 0; j < contrasts; ++j) out.emplace_back(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(cols) - 1.0;
      for (const EllipseSpec& e : ellipses) {
        if (!inside(e, x, y)) continue;
        for (std::size_t j = 0; j < contrasts; ++j) {
          out[j](r, c) += e.intensities[j % e.intensities.size()];
        }
      }
    }
  }
  for (ComplexGrid& g : out) {
    double peak = 0.0;
    for (const cplx& z : g.values()) peak = std::max(peak, z.real());
    if (peak > 0.0) {
      for (cplx& z : g.values()) z = std::max(z.real(), 0.0) / peak;
    }
  }
  return out;
}

std::vector<ComplexGrid> shepp_logan_multicontrast(std::size_t rows, std::size_t cols,
                                                   std::size_t contrasts) {
  return rasterize_ellipses(rows, cols, shepp_logan_ellipses(), contrasts);
}

std::vector<ComplexGrid> brain_like_multicontrast(std::size_t rows, std::size_t cols,
                                                  std::size_t contrasts) {
  require_contrasts(contrasts);
  // Region tables for (T1, T2, PD)-like contrasts; additive like Shepp-Logan.
  const std::vector<EllipseSpec> skeleton = {
      {0.00, 0.00, 0.74, 0.92, 0.0, {0.80, 0.30, 0.70}},           // scalp
      {0.00, -0.01, 0.68, 0.86, 0.0, {-0.55, -0.20, -0.30}},       // skull
      {0.00, -0.02, 0.64, 0.82, 0.0, {0.35, 0.50, 0.45}},          // gray matter
      {0.00, 0.02, 0.50, 0.64, 0.0, {0.20, -0.25, -0.10}},         // white matter
      {0.16, 0.08, 0.07, 0.26, deg(-14), {-0.55, 0.60, 0.15}},     // ventricles
      {-0.16, 0.08, 0.07, 0.26, deg(14), {-0.55, 0.60, 0.15}},
      {0.00, -0.30, 0.20, 0.08, 0.0, {-0.15, 0.20, 0.05}},         // deep nucleus
      {0.30, -0.42, 0.05, 0.05, 0.0, {0.25, 0.35, 0.20}},          // lesions
      {-0.28, 0.45, 0.04, 0.06, deg(30), {0.30, -0.15, 0.15}},
  };
  std::vector<ComplexGrid> base = rasterize_ellipses(rows, cols, skeleton, 3);

  struct Blob {
    double cx, cy, width;
    double amp[3];
  };
  const Blob blobs[] = {
      {-0.25, 0.30, 0.22, {0.12, -0.10, 0.06}},
      {0.28, 0.25, 0.18, {-0.08, 0.14, 0.05}},
      {0.05, -0.45, 0.25, {0.10, 0.08, -0.07}},
      {-0.30, -0.20, 0.20, {-0.06, 0.10, 0.09}},
  };
  const EllipseSpec brain{0.00, -0.02, 0.64, 0.82, 0.0, {1.0}};

  std::vector<ComplexGrid> out;
  for (std::size_t j = 0; j < contrasts; ++j) {
    const std::size_t t = j % 3;
    ComplexGrid g = base[t];
    for (std::size_t r = 0; r < rows; ++r) {
      const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(rows);
      for (std::size_t c = 0; c < cols; ++c) {
        const double x = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(cols) - 1.0;
        if (!inside(brain, x, y)) continue;
        double mod = 1.0;
        for (const Blob& b : blobs) {
          const double d2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
          mod += b.amp[t] * std::exp(-d2 / (2.0 * b.width * b.width));
        }
        g(r, c) *= mod;
      }
    }
    double peak = 0.0;
    for (const cplx& z : g.values()) peak = std::max(peak, z.real());
    for (cplx& z : g.values()) z /= peak;
    out.push_back(std::move(g));
  }
  return out;
}

PhantomKind parse_phantom_kind(std::string_view name) {
  if (name == "shepp-logan") return PhantomKind::SheppLogan;
  if (name == "brain-like") return PhantomKind::BrainLike;
  fail_invalid("unknown phantom type '" + std::string(name) + "' (expected shepp-logan|brain-like)");
}

std::vector<ComplexGrid> make_phantom(PhantomKind kind, std::size_t rows, std::size_t cols,
                                      std::size_t contrasts) {
  return kind == PhantomKind::SheppLogan ? shepp_logan_multicontrast(rows, cols, contrasts)
                                         : brain_like_multicontrast(rows, cols, contrasts);
}

}  // namespace edgerecon
