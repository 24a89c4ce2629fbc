#include <cmath>
#include <random>
#include <string>

#include "edgerecon/error.hpp"
#include "edgerecon/scene.hpp"

namespace edgerecon {

std::vector<ComplexGrid> kspace_noise(std::size_t rows, std::size_t cols, std::size_t contrasts,
                                      const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    fail_invalid("noise sigma must be finite and >= 0, got " + std::to_string(noise.sigma));
  }
  std::vector<ComplexGrid> out;
  for (std::size_t j = 0; j < contrasts; ++j) out.emplace_back(rows, cols);
  if (noise.sigma == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  for (ComplexGrid& g : out) {
    for (cplx& z : g.values()) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z = cplx(re, im);
    }
  }
  return out;
}

std::vector<ComplexGrid> simulate_kspace(const std::vector<ComplexGrid>& images,
                                         const SamplingMask& mask, const NoiseSpec& noise) {
  if (images.empty()) fail_invalid("simulate: no images");
  for (const ComplexGrid& u : images) {
    if (!mask.matches(u)) fail_invalid("simulate: image shape does not match the mask");
  }
  const auto noise_grids = kspace_noise(mask.rows(), mask.cols(), images.size(), noise);
  const double scale = 1.0 / std::sqrt(static_cast<double>(mask.size()));
  std::vector<ComplexGrid> out;
  out.reserve(images.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    ComplexGrid spectrum = dft2(images[j]);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      spectrum[i] = mask.sampled(i) ? spectrum[i] + scale * noise_grids[j][i] : cplx(0.0, 0.0);
    }
    out.push_back(std::move(spectrum));
  }
  return out;
}

FidelityData simulate_acquisition(const std::vector<ComplexGrid>& images, const SamplingMask& mask,
                                  const NoiseSpec& noise, bool weighted, double weight_cap) {
  auto kspace = simulate_kspace(images, mask, noise);
  if (weighted) return FidelityData::weighted(std::move(kspace), mask, weight_cap);
  return FidelityData(std::move(kspace), mask);
}

}  // namespace edgerecon
