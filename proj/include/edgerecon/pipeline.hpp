#pragma once

#include <string_view>
#include <vector>

#include "edgerecon/assembly.hpp"
#include "edgerecon/edge_solver.hpp"
#include "edgerecon/grid.hpp"
#include "edgerecon/trace.hpp"

namespace edgerecon {

enum class Method {
  EdgeJoint,          // "er": joint Jacobian FISTA, then closed-form assembly
  EdgeJointWeighted,  // "er-weighted": same with noise weights
  ZeroFill,           // idft2 of the masked data
  Independent,        // the er solver with every contrast decoupled
};

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct ReconOptions {
  Method method = Method::EdgeJoint;
  SolverConfig solver;  // `weighted` and `coupling` are set from `method`
  double beta = 1e-3;
  bool zero_init = false;  // start FISTA from v = 0 instead of the zero-fill Jacobian
};

struct ReconResult {
  std::vector<ComplexGrid> images;
  SolverTrace trace;
  int iterations = 0;
  double seconds = 0.0;
};

// Reconstructs every contrast from masked k-space data. With `truth` the trace
// carries per-iteration relative errors of the assembled images.
ReconResult reconstruct(const std::vector<ComplexGrid>& kspace, const SamplingMask& mask,
                        const ReconOptions& options,
                        const std::vector<ComplexGrid>* truth = nullptr);

std::vector<ComplexGrid> zero_filled(const std::vector<ComplexGrid>& kspace);

}  // namespace edgerecon
