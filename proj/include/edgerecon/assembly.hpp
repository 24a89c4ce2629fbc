#pragma once

#include <vector>

#include "edgerecon/grid.hpp"
#include "edgerecon/jacobian.hpp"

namespace edgerecon {

struct AssemblyConfig {
  double beta = 1e-3;  // weight of the k-space data term
};

// Closed-form minimizer of
//   1/2 ||D1 u - v1||^2 + 1/2 ||D2 u - v2||^2 + beta/2 ||P dft2(u) - f||^2.
// Frequencies where the normal-equation denominator vanishes (DC when it is
// unsampled or beta == 0) are set to zero.
ComplexGrid assemble(const ComplexGrid& v1, const ComplexGrid& v2, const ComplexGrid& f,
                     const SamplingMask& mask, const AssemblyConfig& cfg);

// Same, from the spectra dft2(v1), dft2(v2).
ComplexGrid assemble_from_spectra(const ComplexGrid& v1_hat, const ComplexGrid& v2_hat,
                                  const ComplexGrid& f, const SamplingMask& mask,
                                  const AssemblyConfig& cfg);

// Every contrast of the field against its k-space data.
std::vector<ComplexGrid> assemble_all(const JacobianField& v, const std::vector<ComplexGrid>& kspace,
                                      const SamplingMask& mask, const AssemblyConfig& cfg);

// The objective assemble() minimizes.
double assembly_residual(const ComplexGrid& u, const ComplexGrid& v1, const ComplexGrid& v2,
                         const ComplexGrid& f, const SamplingMask& mask, const AssemblyConfig& cfg);

}  // namespace edgerecon
