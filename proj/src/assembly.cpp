#include "edgerecon/assembly.hpp"

#include <cmath>
#include <string>

#include "edgerecon/error.hpp"

namespace edgerecon {

namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    fail_invalid("assembly beta must be finite and >= 0, got " + std::to_string(beta));
  }
}

}  // namespace

ComplexGrid assemble_from_spectra(const ComplexGrid& v1_hat, const ComplexGrid& v2_hat,
                                  const ComplexGrid& f, const SamplingMask& mask,
                                  const AssemblyConfig& cfg) {
  check_beta(cfg.beta);
  if (!v1_hat.same_shape(f) || !v2_hat.same_shape(f) || !mask.matches(f)) {
    fail_invalid("assemble: gradient, data and mask shapes differ");
  }
  const auto d1 = derivative_spectrum(f.rows(), f.cols(), Axis::Rows);
  const auto d2 = derivative_spectrum(f.rows(), f.cols(), Axis::Cols);
  ComplexGrid u_hat(f.rows(), f.cols());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double data_weight = mask.sampled(i) ? cfg.beta : 0.0;
    const double denom = std::norm(d1[i]) + std::norm(d2[i]) + data_weight;
    if (denom == 0.0) continue;
    const cplx numer =
        std::conj(d1[i]) * v1_hat[i] + std::conj(d2[i]) * v2_hat[i] + data_weight * f[i];
    u_hat[i] = numer / denom;
  }
  idft2_inplace(u_hat);
  return u_hat;
}

ComplexGrid assemble(const ComplexGrid& v1, const ComplexGrid& v2, const ComplexGrid& f,
                     const SamplingMask& mask, const AssemblyConfig& cfg) {
  if (!v1.same_shape(f) || !v2.same_shape(f)) fail_invalid("assemble: gradient and data shapes differ");
  return assemble_from_spectra(dft2(v1), dft2(v2), f, mask, cfg);
}

std::vector<ComplexGrid> assemble_all(const JacobianField& v, const std::vector<ComplexGrid>& kspace,
                                      const SamplingMask& mask, const AssemblyConfig& cfg) {
  if (kspace.size() != v.contrasts()) fail_invalid("assemble_all: contrast count mismatch");
  std::vector<ComplexGrid> out;
  out.reserve(kspace.size());
  for (std::size_t j = 0; j < kspace.size(); ++j) {
    out.push_back(assemble(v.component(Axis::Rows, j), v.component(Axis::Cols, j), kspace[j],
                           mask, cfg));
  }
  return out;
}

double assembly_residual(const ComplexGrid& u, const ComplexGrid& v1, const ComplexGrid& v2,
                         const ComplexGrid& f, const SamplingMask& mask, const AssemblyConfig& cfg) {
  check_beta(cfg.beta);
  if (!u.same_shape(v1) || !u.same_shape(v2) || !u.same_shape(f) || !mask.matches(u)) {
    fail_invalid("assembly_residual: shapes differ");
  }
  const double g1 = frobenius_distance(finite_difference(u, Axis::Rows), v1);
  const double g2 = frobenius_distance(finite_difference(u, Axis::Cols), v2);
  const double data = frobenius_distance(apply_mask(dft2(u), mask), f);
  return 0.5 * (g1 * g1 + g2 * g2) + 0.5 * cfg.beta * data * data;
}

}  // namespace edgerecon
