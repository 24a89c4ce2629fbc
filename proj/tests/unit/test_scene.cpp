#include "doctest.h"

#include <cmath>
#include <random>

#include "edgerecon/error.hpp"
#include "edgerecon/grid.hpp"
#include "edgerecon/scene.hpp"
#include "oracles.hpp"

using namespace edgerecon;

namespace {

// Centered coordinates of a DFT-native index.
std::pair<long, long> centered(std::size_t idx, std::size_t rows, std::size_t cols) {
  const long r = static_cast<long>(idx / cols), c = static_cast<long>(idx % cols);
  long cr = (r + static_cast<long>(rows / 2)) % static_cast<long>(rows);
  long cc = (c + static_cast<long>(cols / 2)) % static_cast<long>(cols);
  return {cr - static_cast<long>(rows / 2), cc - static_cast<long>(cols / 2)};
}

std::vector<std::uint8_t> edge_map(const ComplexGrid& u) {
  std::vector<std::uint8_t> e(u.size());
  const ComplexGrid dr = oracle::pixel_difference(u, Axis::Rows);
  const ComplexGrid dc = oracle::pixel_difference(u, Axis::Cols);
  for (std::size_t i = 0; i < u.size(); ++i) e[i] = std::hypot(std::abs(dr[i]), std::abs(dc[i])) > 1e-9;
  return e;
}

}  // namespace

TEST_CASE("shepp-logan contrasts share support and lie in [0, 1]") {
  const auto u = shepp_logan_multicontrast(128, 128, 3);
  REQUIRE(u.size() == 3);
  for (std::size_t i = 0; i < u[0].size(); ++i) {
    const bool support = u[0][i] != cplx(0, 0);
    for (const ComplexGrid& g : u) {
      CHECK((g[i] != cplx(0, 0)) == support);
      CHECK(g[i].imag() == 0.0);
      CHECK(g[i].real() >= 0.0);
      CHECK(g[i].real() <= 1.0);
    }
  }
  for (const ComplexGrid& g : u) {
    double peak = 0;
    for (const cplx& z : g.values()) peak = std::max(peak, z.real());
    CHECK(peak == 1.0);
  }
}

TEST_CASE("shepp-logan edge maps agree across contrasts") {
  const auto u = shepp_logan_multicontrast(256, 256, 3);
  const auto e1 = edge_map(u[1]), e2 = edge_map(u[2]);
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    both += e1[i] && e2[i];
    either += e1[i] || e2[i];
  }
  CHECK(static_cast<double>(both) / static_cast<double>(either) >= 0.99);
}

TEST_CASE("contrasts beyond the tables reuse them") {
  const auto u = shepp_logan_multicontrast(32, 32, 4);
  CHECK(u[3] == u[0]);
  CHECK_THROWS_AS(shepp_logan_multicontrast(32, 32, 0), Error);
}

TEST_CASE("brain-like phantom") {
  const auto u = brain_like_multicontrast(96, 96, 3);
  REQUIRE(u.size() == 3);
  for (std::size_t i = 0; i < u[0].size(); ++i) {
    const bool support = u[0][i] != cplx(0, 0);
    for (const ComplexGrid& g : u) {
      CHECK((g[i] != cplx(0, 0)) == support);
      CHECK(g[i].real() >= 0.0);
      CHECK(g[i].real() <= 1.0);
    }
  }
  CHECK(u[0] != u[1]);
  CHECK(parse_phantom_kind("brain-like") == PhantomKind::BrainLike);
  CHECK_THROWS_AS(parse_phantom_kind("cat"), Error);
}

TEST_CASE("radial mask contract") {
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{64, 64}, {256, 256}, {48, 80}}) {
    for (double target : {0.05, 0.135, 0.25, 0.5}) {
      const SamplingMask m = radial_mask(rows, cols, target, 3);
      CHECK(m.ratio() >= target);
      CHECK(m.ratio() <= target + 2.0 / static_cast<double>(std::min(rows, cols)));
      CHECK(m.sampled(0));
    }
  }
  CHECK(radial_mask(32, 32, 1.0, 0) == SamplingMask::full(32, 32));
  CHECK_THROWS_AS(radial_mask(32, 32, 0.0, 0), Error);
  CHECK_THROWS_AS(radial_mask(32, 32, 1.5, 0), Error);
  CHECK(radial_mask(64, 64, 0.2, 5) == radial_mask(64, 64, 0.2, 5));
  CHECK(radial_mask(64, 64, 0.2, 5) != radial_mask(64, 64, 0.2, 6));
}

TEST_CASE("a single horizontal spoke is the DC row") {
  const SamplingMask m = radial_mask_with_spokes(16, 16, 1);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) CHECK(m.sampled(r, c) == (r == 0));
}

TEST_CASE("poisson mask contract") {
  for (std::uint64_t seed : {1, 2, 3}) {
    PoissonMaskInfo info;
    const SamplingMask m = poisson_mask(256, 256, 0.25, seed, &info);
    CHECK(std::abs(m.ratio() - 0.25) <= 0.01);
    CHECK(info.center_side == 16);

    std::vector<std::pair<long, long>> outside;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto [y, x] = centered(i, 256, 256);
      const bool in_center = y >= -8 && y < 8 && x >= -8 && x < 8;
      if (in_center) {
        CHECK(m.sampled(i));
      } else if (m.sampled(i)) {
        outside.emplace_back(y, x);
      }
    }
    // pairwise audit against both the base radius and the local rule
    double closest = 1e9;
    bool rule_ok = true;
    for (std::size_t a = 0; a < outside.size(); ++a) {
      for (std::size_t b = a + 1; b < outside.size(); ++b) {
        const double dy = double(outside[a].first - outside[b].first);
        const double dx = double(outside[a].second - outside[b].second);
        const double d2 = dy * dy + dx * dx;
        if (d2 > 400.0) continue;
        const double d = std::sqrt(d2);
        closest = std::min(closest, d);
        const double ra = poisson_local_radius(info, 256, 256, double(outside[a].first), double(outside[a].second));
        const double rb = poisson_local_radius(info, 256, 256, double(outside[b].first), double(outside[b].second));
        if (d < std::max(ra, rb)) rule_ok = false;
      }
    }
    CHECK(closest >= info.radius);
    CHECK(rule_ok);
  }
  CHECK(poisson_mask(64, 64, 0.3, 9) == poisson_mask(64, 64, 0.3, 9));
}

TEST_CASE("mask kinds") {
  CHECK(parse_mask_kind("poisson") == MaskKind::Poisson);
  CHECK(to_string(MaskKind::Radial) == "radial");
  CHECK(make_mask(MaskKind::Full, 8, 8, 0.3, 0) == SamplingMask::full(8, 8));
  CHECK_THROWS_AS(parse_mask_kind("spiral"), Error);
}

TEST_CASE("noise statistics") {
  const auto e = kspace_noise(256, 256, 1, NoiseSpec{4.0, 17});
  double sr = 0, si = 0, mr = 0;
  for (const cplx& z : e[0].values()) {
    mr += z.real();
    sr += z.real() * z.real();
    si += z.imag() * z.imag();
  }
  const double n = 65536.0;
  mr /= n;
  CHECK(std::abs(sr / n - mr * mr - 16.0) <= 0.05 * 16.0);
  CHECK(std::abs(si / n - 16.0) <= 0.05 * 16.0);
  CHECK(kspace_noise(8, 8, 2, NoiseSpec{1.0, 3}) == kspace_noise(8, 8, 2, NoiseSpec{1.0, 3}));
  CHECK_THROWS_AS(kspace_noise(8, 8, 1, NoiseSpec{-1.0, 0}), Error);
}

TEST_CASE("simulated k-space") {
  const auto u = shepp_logan_multicontrast(32, 32, 2);
  const SamplingMask full = SamplingMask::full(32, 32);
  const auto f = simulate_kspace(u, full, NoiseSpec{0.0, 0});
  for (std::size_t j = 0; j < 2; ++j) CHECK(f[j] == dft2(u[j]));

  const SamplingMask mask = radial_mask(32, 32, 0.3, 1);
  const auto noisy = simulate_kspace(u, mask, NoiseSpec{4.0, 2});
  const auto e = kspace_noise(32, 32, 2, NoiseSpec{4.0, 2});
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexGrid clean = dft2(u[j]);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      const cplx expect = mask.sampled(i) ? clean[i] + e[j][i] / 32.0 : cplx(0, 0);
      CHECK(std::abs(noisy[j][i] - expect) < 1e-14);
    }
  }
  CHECK_THROWS_AS(simulate_kspace(u, SamplingMask::full(16, 16), NoiseSpec{}), Error);
}
