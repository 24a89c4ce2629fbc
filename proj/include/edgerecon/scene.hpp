#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "edgerecon/edge_solver.hpp"
#include "edgerecon/grid.hpp"

namespace edgerecon {

// Ellipse in normalized image coordinates [-1, 1]^2 (x to the right, y up)
// adding `intensities[j]` to contrast j inside it.
struct EllipseSpec {
  double cx = 0.0;
  double cy = 0.0;
  double a = 1.0;      // semi-axis along the rotated x direction
  double b = 1.0;
  double angle = 0.0;  // radians, counterclockwise
  std::vector<double> intensities;
};

// Ten-ellipse Shepp-Logan geometry with three contrast intensity tables.
// Contrast j uses table j mod 3.
std::vector<EllipseSpec> shepp_logan_ellipses();

// Rasterizes ellipses by point sampling at pixel centers. Each contrast is
// divided by its maximum so values lie in [0, 1].
std::vector<ComplexGrid> rasterize_ellipses(std::size_t rows, std::size_t cols,
                                            const std::vector<EllipseSpec>& ellipses,
                                            std::size_t contrasts);

std::vector<ComplexGrid> shepp_logan_multicontrast(std::size_t rows, std::size_t cols,
                                                   std::size_t contrasts);

// Procedural brain-like phantom: head and tissue ellipses shared by every
// contrast, plus smooth contrast-specific intensity modulation inside the
// brain.
std::vector<ComplexGrid> brain_like_multicontrast(std::size_t rows, std::size_t cols,
                                                  std::size_t contrasts);

enum class PhantomKind { SheppLogan, BrainLike };
PhantomKind parse_phantom_kind(std::string_view name);  // "shepp-logan" | "brain-like"
std::vector<ComplexGrid> make_phantom(PhantomKind kind, std::size_t rows, std::size_t cols,
                                      std::size_t contrasts);

// Equiangular spokes through DC on the centered frequency grid. The spoke
// count is the smallest whose achieved ratio reaches target_ratio.
SamplingMask radial_mask(std::size_t rows, std::size_t cols, double target_ratio, std::uint64_t seed);

// Mask with `spokes` equiangular spokes.
SamplingMask radial_mask_with_spokes(std::size_t rows, std::size_t cols, std::size_t spokes);

struct PoissonMaskInfo {
  double radius = 0.0;       // base radius r0 after bisection
  double density_slope = 0.0;
  std::size_t center_side = 0;
};

// Variable-density Poisson-disk mask with a fully sampled center square.
// Samples outside the center satisfy dist(p, q) >= max(r(p), r(q)) with
// r(p) = radius * (1 + density_slope * rho(p)), rho the normalized frequency
// radius.
SamplingMask poisson_mask(std::size_t rows, std::size_t cols, double target_ratio,
                          std::uint64_t seed, PoissonMaskInfo* info = nullptr);

// Local Poisson-disk radius at a centered frequency offset.
double poisson_local_radius(const PoissonMaskInfo& info, std::size_t rows, std::size_t cols,
                            double dy, double dx);

enum class MaskKind { Radial, Poisson, Full };
MaskKind parse_mask_kind(std::string_view name);  // "radial" | "poisson" | "full"
std::string_view to_string(MaskKind kind);
SamplingMask make_mask(MaskKind kind, std::size_t rows, std::size_t cols, double ratio,
                       std::uint64_t seed);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Complex Gaussian noise with i.i.d. N(0, sigma^2) real and imaginary parts,
// one grid per contrast, in unnormalized-DFT units.
std::vector<ComplexGrid> kspace_noise(std::size_t rows, std::size_t cols, std::size_t contrasts,
                                      const NoiseSpec& noise);

// f_j = P (dft2(u_j) + e_j / sqrt(rows * cols)): e is drawn in the scale of an
// unnormalized DFT and mapped into the unitary transform used here.
std::vector<ComplexGrid> simulate_kspace(const std::vector<ComplexGrid>& images,
                                         const SamplingMask& mask, const NoiseSpec& noise);

// simulate_kspace wrapped into fidelity data; weighted data uses `weight_cap`.
FidelityData simulate_acquisition(const std::vector<ComplexGrid>& images, const SamplingMask& mask,
                                  const NoiseSpec& noise, bool weighted = false,
                                  double weight_cap = 25.0);

}  // namespace edgerecon
