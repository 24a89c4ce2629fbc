#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "edgerecon/error.hpp"
#include "edgerecon/scene.hpp"

namespace edgerecon {

namespace {

void check_ratio(double ratio) {
  if (!(ratio > 0.0) || !(ratio <= 1.0)) {
    fail_invalid("sampling ratio must be in (0, 1], got " + std::to_string(ratio));
  }
}

// Centered (fftshifted) indices to DFT-native order.
SamplingMask unshift(std::size_t rows, std::size_t cols, const std::vector<std::uint8_t>& centered) {
  std::vector<std::uint8_t> native(rows * cols, 0);
  const std::size_t cy = rows / 2;
  const std::size_t cx = cols / 2;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t nr = (r + rows - cy) % rows;
      const std::size_t nc = (c + cols - cx) % cols;
      native[nr * cols + nc] = centered[r * cols + c];
    }
  }
  return SamplingMask(rows, cols, std::move(native));
}

SamplingMask spokes_mask(std::size_t rows, std::size_t cols, std::size_t spokes, double phase) {
  std::vector<std::uint8_t> centered(rows * cols, 0);
  const long cy = static_cast<long>(rows / 2);
  const long cx = static_cast<long>(cols / 2);
  const long nrows = static_cast<long>(rows);
  const long ncols = static_cast<long>(cols);
  for (std::size_t k = 0; k < spokes; ++k) {
    const double theta =
        std::numbers::pi * (static_cast<double>(k) + phase) / static_cast<double>(spokes);
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    // Step along the major axis, one pixel per step.
    if (std::abs(dx) >= std::abs(dy)) {
      for (long ox = -cx; ox < ncols - cx; ++ox) {
        const long oy = std::lround(static_cast<double>(ox) * dy / dx);
        const long r = cy + oy;
        if (r >= 0 && r < nrows) centered[r * ncols + (cx + ox)] = 1;
      }
    } else {
      for (long oy = -cy; oy < nrows - cy; ++oy) {
        const long ox = std::lround(static_cast<double>(oy) * dx / dy);
        const long c = cx + ox;
        if (c >= 0 && c < ncols) centered[(cy + oy) * ncols + c] = 1;
      }
    }
  }
  centered[cy * ncols + cx] = 1;
  return unshift(rows, cols, centered);
}

}  // namespace

SamplingMask radial_mask_with_spokes(std::size_t rows, std::size_t cols, std::size_t spokes) {
  return spokes_mask(rows, cols, spokes, 0.0);
}

SamplingMask radial_mask(std::size_t rows, std::size_t cols, double target_ratio, std::uint64_t seed) {
  check_ratio(target_ratio);
  if (rows < 2 || cols < 2) fail_invalid("mask must be at least 2x2");
  if (target_ratio >= 1.0) return SamplingMask::full(rows, cols);

  // The seed rotates the spoke set by a fraction of the angular spacing.
  std::mt19937_64 rng(seed);
  const double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  const std::size_t max_spokes = 4 * (rows + cols);
  for (std::size_t n = 1; n <= max_spokes; ++n) {
    SamplingMask m = spokes_mask(rows, cols, n, phase);
    if (m.ratio() >= target_ratio) return m;
  }
  fail_invalid("radial mask cannot reach ratio " + std::to_string(target_ratio) + " on a " +
               std::to_string(rows) + "x" + std::to_string(cols) + " grid");
}

double poisson_local_radius(const PoissonMaskInfo& info, std::size_t rows, std::size_t cols,
                            double dy, double dx) {
  const double half = 0.5 * static_cast<double>(std::min(rows, cols));
  const double rho = std::sqrt(dy * dy + dx * dx) / half;
  return info.radius * (1.0 + info.density_slope * rho);
}

namespace {

struct PoissonRun {
  std::vector<std::uint8_t> centered;
  std::size_t count = 0;
};

PoissonRun poisson_dart_throw(std::size_t rows, std::size_t cols, const PoissonMaskInfo& info,
                              const std::vector<std::uint32_t>& order) {
  PoissonRun run;
  run.centered.assign(rows * cols, 0);
  const long cy = static_cast<long>(rows / 2);
  const long cx = static_cast<long>(cols / 2);
  const long side = static_cast<long>(info.center_side);
  const long top = cy - side / 2;
  const long left = cx - side / 2;
  for (long r = top; r < top + side; ++r) {
    for (long c = left; c < left + side; ++c) {
      run.centered[r * static_cast<long>(cols) + c] = 1;
      ++run.count;
    }
  }

  const double half = 0.5 * static_cast<double>(std::min(rows, cols));
  const double growth = info.radius * info.density_slope / half;
  // Neighbors q within distance d of p have r(q) <= r(p) + growth * d, so a
  // conflict requires d < r(p) / (1 - growth).
  const double reach = growth < 1.0 ? 1.0 / (1.0 - growth) : 1e9;
  const long nrows = static_cast<long>(rows);
  const long ncols = static_cast<long>(cols);

  // Points accepted outside the center block, as flags and as a list; each
  // candidate is checked against whichever is smaller.
  std::vector<std::uint8_t> accepted(rows * cols, 0);
  std::vector<std::pair<long, long>> accepted_list;
  auto conflicts = [&](long r, long c, double rp, long rr, long cc) {
    const double d = std::hypot(double(rr - r), double(cc - c));
    const double rq = poisson_local_radius(info, rows, cols, double(rr - cy), double(cc - cx));
    return d < std::max(rp, rq);
  };
  for (std::uint32_t idx : order) {
    const long r = static_cast<long>(idx) / ncols;
    const long c = static_cast<long>(idx) % ncols;
    const double rp = poisson_local_radius(info, rows, cols, double(r - cy), double(c - cx));
    const long win = static_cast<long>(std::ceil(std::min(rp * reach, double(nrows + ncols))));
    bool ok = true;
    if (static_cast<double>(accepted_list.size()) < double(2 * win + 1) * double(2 * win + 1)) {
      for (const auto& [rr, cc] : accepted_list) {
        if (conflicts(r, c, rp, rr, cc)) {
          ok = false;
          break;
        }
      }
    } else {
      for (long rr = std::max(0L, r - win); ok && rr <= std::min(nrows - 1, r + win); ++rr) {
        for (long cc = std::max(0L, c - win); cc <= std::min(ncols - 1, c + win); ++cc) {
          if (accepted[rr * ncols + cc] && conflicts(r, c, rp, rr, cc)) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) {
      accepted[idx] = 1;
      accepted_list.emplace_back(r, c);
      run.centered[idx] = 1;
      ++run.count;
    }
  }
  return run;
}

}  // namespace

SamplingMask poisson_mask(std::size_t rows, std::size_t cols, double target_ratio,
                          std::uint64_t seed, PoissonMaskInfo* info_out) {
  check_ratio(target_ratio);
  if (rows < 2 || cols < 2) fail_invalid("mask must be at least 2x2");

  PoissonMaskInfo info;
  info.density_slope = 2.0;
  info.center_side = std::max<std::size_t>(1, std::min(rows, cols) / 16);

  const long cy = static_cast<long>(rows / 2);
  const long cx = static_cast<long>(cols / 2);
  const long side = static_cast<long>(info.center_side);
  const long top = cy - side / 2;
  const long left = cx - side / 2;

  std::vector<std::uint32_t> order;
  for (long r = 0; r < static_cast<long>(rows); ++r) {
    for (long c = 0; c < static_cast<long>(cols); ++c) {
      if (r >= top && r < top + side && c >= left && c < left + side) continue;
      order.push_back(static_cast<std::uint32_t>(r * static_cast<long>(cols) + c));
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const double total = static_cast<double>(rows * cols);
  constexpr double kTolerance = 0.01;

  // The ratio decreases with the radius; bisect on it. At radius 0.1 every
  // local radius stays below 1, so every integer point is accepted.
  double lo = 0.1;
  double hi = 0.5 * static_cast<double>(std::max(rows, cols));
  PoissonRun best;
  double best_radius = lo;
  double best_gap = 2.0;
  for (int it = 0; it < 60; ++it) {
    info.radius = 0.5 * (lo + hi);
    PoissonRun run = poisson_dart_throw(rows, cols, info, order);
    const double ratio = static_cast<double>(run.count) / total;
    const double gap = std::abs(ratio - target_ratio);
    if (gap < best_gap) {
      best_gap = gap;
      best_radius = info.radius;
      best = std::move(run);
    }
    if (best_gap <= 0.25 * kTolerance) break;
    if (ratio > target_ratio) {
      lo = info.radius;
    } else {
      hi = info.radius;
    }
  }
  if (best_gap > kTolerance) {
    fail_invalid("Poisson mask cannot reach ratio " + std::to_string(target_ratio) + " within " +
                 std::to_string(kTolerance) + " on a " + std::to_string(rows) + "x" +
                 std::to_string(cols) + " grid");
  }
  info.radius = best_radius;
  if (info_out != nullptr) *info_out = info;
  return unshift(rows, cols, best.centered);
}

MaskKind parse_mask_kind(std::string_view name) {
  if (name == "radial") return MaskKind::Radial;
  if (name == "poisson") return MaskKind::Poisson;
  if (name == "full") return MaskKind::Full;
  fail_invalid("unknown mask type '" + std::string(name) + "' (expected radial|poisson|full)");
}

std::string_view to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::Radial: return "radial";
    case MaskKind::Poisson: return "poisson";
    case MaskKind::Full: return "full";
  }
  return "full";
}

SamplingMask make_mask(MaskKind kind, std::size_t rows, std::size_t cols, double ratio,
                       std::uint64_t seed) {
  switch (kind) {
    case MaskKind::Radial: return radial_mask(rows, cols, ratio, seed);
    case MaskKind::Poisson: return poisson_mask(rows, cols, ratio, seed);
    case MaskKind::Full: return SamplingMask::full(rows, cols);
  }
  return SamplingMask::full(rows, cols);
}

}  // namespace edgerecon
