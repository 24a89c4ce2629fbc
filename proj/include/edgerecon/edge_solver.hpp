#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "edgerecon/grid.hpp"
#include "edgerecon/jacobian.hpp"
#include "edgerecon/matrix_prox.hpp"
#include "edgerecon/trace.hpp"

namespace edgerecon {

// D_axis applied to already-masked k-space data.
ComplexGrid derivative_data(const ComplexGrid& f, const SamplingMask& mask, Axis axis);

// Inverse-variance weights of the derivative-domain noise, clamped at `cap`;
// zero where the derivative symbol vanishes.
std::vector<double> noise_weights(std::size_t rows, std::size_t cols, Axis axis, double cap);

// Masked k-space data for m contrasts together with everything the Jacobian
// fidelity needs: derivative data g_{i,j} and per-axis residual weights.
class FidelityData {
 public:
  using AxisWeights = std::array<std::vector<double>, 2>;

  // kspace[j] must vanish off the mask. Without `psi` the fidelity is the
  // plain masked least squares.
  FidelityData(std::vector<ComplexGrid> kspace, SamplingMask mask,
               std::optional<AxisWeights> psi = std::nullopt);

  // Weighted fidelity with Psi from noise_weights(..., cap).
  static FidelityData weighted(std::vector<ComplexGrid> kspace, SamplingMask mask, double cap);

  std::size_t rows() const noexcept { return mask_.rows(); }
  std::size_t cols() const noexcept { return mask_.cols(); }
  std::size_t contrasts() const noexcept { return kspace_.size(); }

  const SamplingMask& mask() const noexcept { return mask_; }
  const std::vector<ComplexGrid>& kspace() const noexcept { return kspace_; }
  const ComplexGrid& derivative(Axis axis, std::size_t j) const {
    return derivative_[JacobianField::index(axis, j)];
  }

  bool is_weighted() const noexcept { return psi_.has_value(); }
  const std::optional<AxisWeights>& psi() const noexcept { return psi_; }

  // mask * Psi_i (or just the mask when unweighted).
  const std::vector<double>& residual_weights(Axis axis) const {
    return residual_weights_[axis == Axis::Rows ? 0 : 1];
  }

 private:
  std::vector<ComplexGrid> kspace_;
  SamplingMask mask_;
  std::vector<ComplexGrid> derivative_;
  std::optional<AxisWeights> psi_;
  AxisWeights residual_weights_;
};

// H(v) = 1/2 sum_{i,j} || P dft2(v_ij) - g_ij ||^2_{Psi_i}
double fidelity_value(const JacobianField& v, const FidelityData& d);
JacobianField fidelity_grad(const JacobianField& v, const FidelityData& d);

// 1/L for the fidelity gradient: 1 unweighted, 1/max Psi weighted.
double step_size_auto(const FidelityData& d);

// Joint couples all contrasts in one 2 x m norm per pixel; PerContrast
// applies the norm to each 2 x 1 column separately (independent TV).
enum class Coupling { Joint, PerContrast };

// Real restricts the iterates to real Jacobians (gradient projected onto its
// real part). Complex is only defined for the Frobenius norm.
enum class Domain { Real, Complex };

struct SolverConfig {
  double alpha = 1e-3;
  MatrixNorm norm = MatrixNorm::Frobenius;
  std::optional<double> tau;  // nullopt: step_size_auto
  int max_iters = 300;
  double tol = 1e-6;
  bool weighted = false;
  double weight_cap = 25.0;
  Coupling coupling = Coupling::Joint;
  Domain domain = Domain::Real;
  bool record_objective = true;

  void validate() const;
};

// alpha * sum_x ||v(x)|| + H(v) under the config's norm and coupling.
double objective_value(const JacobianField& v, const FidelityData& d, const SolverConfig& cfg);

// Per-pixel prox with threshold `threshold` under the config's norm,
// coupling and domain.
void apply_prox(JacobianField& v, const SolverConfig& cfg, double threshold);

// Jacobian of the zero-filled reconstruction idft2(f_j).
JacobianField initial_jacobian(const FidelityData& d, Domain domain);

// Reference images for per-iteration error tracking. The image at iteration
// k is assembled from v_k with weight `beta`.
struct GroundTruth {
  std::vector<ComplexGrid> images;
  double beta = 1e-3;
};

struct SolverResult {
  JacobianField v;
  SolverTrace trace;
  int iterations = 0;
  bool converged = false;
  double tau = 0.0;
  double seconds = 0.0;
};

SolverResult run_fista(const FidelityData& d, const SolverConfig& cfg, const JacobianField& v0,
                       const GroundTruth* truth = nullptr);

}  // namespace edgerecon
