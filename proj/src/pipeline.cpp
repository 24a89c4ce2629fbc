#include "edgerecon/pipeline.hpp"

#include <chrono>
#include <limits>
#include <string>

#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"

namespace edgerecon {

Method parse_method(std::string_view name) {
  if (name == "er") return Method::EdgeJoint;
  if (name == "er-weighted") return Method::EdgeJointWeighted;
  if (name == "zero-fill") return Method::ZeroFill;
  if (name == "independent") return Method::Independent;
  fail_invalid("unknown method '" + std::string(name) +
               "' (expected er|er-weighted|zero-fill|independent)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::EdgeJoint: return "er";
    case Method::EdgeJointWeighted: return "er-weighted";
    case Method::ZeroFill: return "zero-fill";
    case Method::Independent: return "independent";
  }
  return "er";
}

std::vector<ComplexGrid> zero_filled(const std::vector<ComplexGrid>& kspace) {
  std::vector<ComplexGrid> out;
  out.reserve(kspace.size());
  for (const ComplexGrid& f : kspace) out.push_back(idft2(f));
  return out;
}

ReconResult reconstruct(const std::vector<ComplexGrid>& kspace, const SamplingMask& mask,
                        const ReconOptions& options, const std::vector<ComplexGrid>* truth) {
  if (kspace.empty()) fail_invalid("reconstruct: no k-space data");
  if (truth != nullptr && truth->size() != kspace.size()) {
    fail_invalid("reconstruct: ground truth has " + std::to_string(truth->size()) +
                 " contrasts, data has " + std::to_string(kspace.size()));
  }

  ReconResult result;
  if (options.method == Method::ZeroFill) {
    const auto start = std::chrono::steady_clock::now();
    FidelityData check(kspace, mask);  // validates shapes and masking
    result.images = zero_filled(kspace);
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.error_columns = truth != nullptr ? kspace.size() : 0;
    TraceRecord rec;
    rec.iter = 0;
    rec.seconds = result.seconds;
    rec.objective = std::numeric_limits<double>::quiet_NaN();
    if (truth != nullptr) {
      for (std::size_t j = 0; j < kspace.size(); ++j) {
        rec.relerr.push_back(relative_error(result.images[j], (*truth)[j]));
      }
    }
    result.trace.records.push_back(std::move(rec));
    return result;
  }

  SolverConfig cfg = options.solver;
  cfg.weighted = options.method == Method::EdgeJointWeighted;
  cfg.coupling = options.method == Method::Independent ? Coupling::PerContrast : Coupling::Joint;

  const FidelityData data = cfg.weighted ? FidelityData::weighted(kspace, mask, cfg.weight_cap)
                                         : FidelityData(kspace, mask);
  const JacobianField v0 = options.zero_init
                               ? JacobianField(data.rows(), data.cols(), data.contrasts())
                               : initial_jacobian(data, cfg.domain);
  GroundTruth gt;
  if (truth != nullptr) gt = GroundTruth{*truth, options.beta};

  SolverResult solved = run_fista(data, cfg, v0, truth != nullptr ? &gt : nullptr);

  const auto start = std::chrono::steady_clock::now();
  result.images = assemble_all(solved.v, kspace, mask, AssemblyConfig{options.beta});
  const double assembly_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.trace = std::move(solved.trace);
  result.iterations = solved.iterations;
  result.seconds = solved.seconds + assembly_seconds;
  return result;
}

}  // namespace edgerecon
