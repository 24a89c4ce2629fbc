#include "edgerecon/edge_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "edgerecon/assembly.hpp"
#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"

namespace edgerecon {

namespace {

constexpr std::array<Axis, 2> kAxes = {Axis::Rows, Axis::Cols};

void require_masked(const ComplexGrid& f, const SamplingMask& mask) {
  if (!mask.matches(f)) fail_invalid("k-space data shape does not match the mask");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask.sampled(i) && f[i] != cplx(0.0, 0.0)) {
      fail_invalid("k-space data is nonzero at an unsampled location");
    }
  }
}

void require_shape(const JacobianField& v, const FidelityData& d) {
  if (v.rows() != d.rows() || v.cols() != d.cols() || v.contrasts() != d.contrasts()) {
    fail_invalid("Jacobian field shape does not match the fidelity data");
  }
}

// out = W * (dft2(component) - g)
void weighted_residual(const ComplexGrid& component, const ComplexGrid& g,
                       const std::vector<double>& weights, ComplexGrid& out) {
  out = component;
  dft2_inplace(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = weights[i] * (out[i] - g[i]);
}

double fidelity_from_spectra(std::span<const ComplexGrid> spectra, const FidelityData& d) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.contrasts(); ++j) {
    for (Axis a : kAxes) {
      const ComplexGrid& s = spectra[JacobianField::index(a, j)];
      const ComplexGrid& g = d.derivative(a, j);
      const auto& w = d.residual_weights(a);
      for (std::size_t i = 0; i < s.size(); ++i) total += w[i] * std::norm(s[i] - g[i]);
    }
  }
  return 0.5 * total;
}

double regularizer(const JacobianField& v, const SolverConfig& cfg) {
  const std::size_t m = v.contrasts();
  double total = 0.0;
  if (cfg.coupling == Coupling::PerContrast) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& g0 = v.component(Axis::Rows, j);
      const auto& g1 = v.component(Axis::Cols, j);
      for (std::size_t p = 0; p < v.pixels(); ++p) {
        total += std::sqrt(std::norm(g0[p]) + std::norm(g1[p]));
      }
    }
    return total;
  }
  if (cfg.domain == Domain::Complex) {
    for (std::size_t p = 0; p < v.pixels(); ++p) {
      double s = 0.0;
      for (const ComplexGrid& g : v.grids()) s += std::norm(g[p]);
      total += std::sqrt(s);
    }
    return total;
  }
  return field_matrix_norm_sum(v, cfg.norm);
}

}  // namespace

ComplexGrid derivative_data(const ComplexGrid& f, const SamplingMask& mask, Axis axis) {
  require_masked(f, mask);
  return multiply(derivative_spectrum(f.rows(), f.cols(), axis), f);
}

std::vector<double> noise_weights(std::size_t rows, std::size_t cols, Axis axis, double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    fail_invalid("weight cap must be finite and > 0, got " + std::to_string(cap));
  }
  const auto d = derivative_spectrum(rows, cols, axis);
  std::vector<double> w(rows * cols, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double mag2 = std::norm(d[i]);
    if (mag2 > 0.0) w[i] = std::min(1.0 / mag2, cap);
  }
  return w;
}

FidelityData::FidelityData(std::vector<ComplexGrid> kspace, SamplingMask mask,
                           std::optional<AxisWeights> psi)
    : kspace_(std::move(kspace)), mask_(std::move(mask)), psi_(std::move(psi)) {
  if (kspace_.empty()) fail_invalid("fidelity data needs at least one contrast");
  for (const ComplexGrid& f : kspace_) require_masked(f, mask_);

  derivative_.resize(2 * kspace_.size());
  for (std::size_t j = 0; j < kspace_.size(); ++j) {
    for (Axis a : kAxes) {
      derivative_[JacobianField::index(a, j)] =
          multiply(derivative_spectrum(rows(), cols(), a), kspace_[j]);
    }
  }

  for (std::size_t k = 0; k < 2; ++k) {
    if (psi_) {
      const auto& p = (*psi_)[k];
      if (p.size() != mask_.size()) fail_invalid("noise weights do not match the grid shape");
      for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) fail_invalid("noise weights must be finite and >= 0");
      }
    }
    residual_weights_[k].assign(mask_.size(), 0.0);
    for (std::size_t i = 0; i < mask_.size(); ++i) {
      if (mask_.sampled(i)) residual_weights_[k][i] = psi_ ? (*psi_)[k][i] : 1.0;
    }
  }
}

FidelityData FidelityData::weighted(std::vector<ComplexGrid> kspace, SamplingMask mask, double cap) {
  const std::size_t rows = mask.rows();
  const std::size_t cols = mask.cols();
  AxisWeights psi{noise_weights(rows, cols, Axis::Rows, cap),
                  noise_weights(rows, cols, Axis::Cols, cap)};
  return FidelityData(std::move(kspace), std::move(mask), std::move(psi));
}

double fidelity_value(const JacobianField& v, const FidelityData& d) {
  require_shape(v, d);
  std::vector<ComplexGrid> spectra(v.grids().begin(), v.grids().end());
  for (ComplexGrid& s : spectra) dft2_inplace(s);
  return fidelity_from_spectra(spectra, d);
}

JacobianField fidelity_grad(const JacobianField& v, const FidelityData& d) {
  require_shape(v, d);
  JacobianField grad(v.rows(), v.cols(), v.contrasts());
  for (std::size_t j = 0; j < v.contrasts(); ++j) {
    for (Axis a : kAxes) {
      ComplexGrid& out = grad.component(a, j);
      weighted_residual(v.component(a, j), d.derivative(a, j), d.residual_weights(a), out);
      idft2_inplace(out);
    }
  }
  return grad;
}

double step_size_auto(const FidelityData& d) {
  if (!d.is_weighted()) return 1.0;
  double peak = 0.0;
  for (const auto& w : *d.psi()) {
    for (double x : w) peak = std::max(peak, x);
  }
  return peak > 0.0 ? 1.0 / peak : 1.0;
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail_invalid("alpha must be finite and > 0, got " + std::to_string(alpha));
  }
  if (tau && (!(*tau > 0.0) || !std::isfinite(*tau))) {
    fail_invalid("tau must be finite and > 0, got " + std::to_string(*tau));
  }
  if (max_iters < 1) fail_invalid("max_iters must be >= 1, got " + std::to_string(max_iters));
  if (!(tol >= 0.0)) fail_invalid("tol must be >= 0, got " + std::to_string(tol));
  if (!(weight_cap > 0.0) || !std::isfinite(weight_cap)) {
    fail_invalid("weight_cap must be finite and > 0, got " + std::to_string(weight_cap));
  }
  if (domain == Domain::Complex && norm != MatrixNorm::Frobenius && coupling == Coupling::Joint) {
    fail_invalid("complex Jacobians are only supported with the Frobenius norm");
  }
}

double objective_value(const JacobianField& v, const FidelityData& d, const SolverConfig& cfg) {
  return cfg.alpha * regularizer(v, cfg) + fidelity_value(v, d);
}

void apply_prox(JacobianField& v, const SolverConfig& cfg, double threshold) {
  const std::size_t m = v.contrasts();
  const std::size_t pixels = v.pixels();

  if (cfg.coupling == Coupling::PerContrast) {
    for (std::size_t j = 0; j < m; ++j) {
      ComplexGrid& g0 = v.component(Axis::Rows, j);
      ComplexGrid& g1 = v.component(Axis::Cols, j);
      for (std::size_t p = 0; p < pixels; ++p) {
        const double n = std::sqrt(std::norm(g0[p]) + std::norm(g1[p]));
        const double k = n > threshold ? (n - threshold) / n : 0.0;
        g0[p] *= k;
        g1[p] *= k;
      }
    }
    return;
  }

  if (cfg.domain == Domain::Complex) {
    for (std::size_t p = 0; p < pixels; ++p) {
      double s = 0.0;
      for (const ComplexGrid& g : v.grids()) s += std::norm(g[p]);
      const double n = std::sqrt(s);
      const double k = n > threshold ? (n - threshold) / n : 0.0;
      for (ComplexGrid& g : v.grids()) g[p] *= k;
    }
    return;
  }

  std::vector<double> row0(m), row1(m);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      row0[j] = v.component(Axis::Rows, j)[p].real();
      row1[j] = v.component(Axis::Cols, j)[p].real();
    }
    prox_rows(cfg.norm, row0, row1, threshold);
    for (std::size_t j = 0; j < m; ++j) {
      v.component(Axis::Rows, j)[p] = row0[j];
      v.component(Axis::Cols, j)[p] = row1[j];
    }
  }
}

JacobianField initial_jacobian(const FidelityData& d, Domain domain) {
  std::vector<ComplexGrid> images;
  images.reserve(d.contrasts());
  for (const ComplexGrid& f : d.kspace()) {
    ComplexGrid u = idft2(f);
    if (domain == Domain::Real) {
      for (cplx& z : u.values()) z = z.real();
    }
    images.push_back(std::move(u));
  }
  return JacobianField::of_images(images);
}

SolverResult run_fista(const FidelityData& d, const SolverConfig& cfg, const JacobianField& v0,
                       const GroundTruth* truth) {
  cfg.validate();
  require_shape(v0, d);
  if (cfg.weighted != d.is_weighted()) {
    fail_invalid(cfg.weighted ? "weighted solve requested but the data carries no noise weights"
                              : "unweighted solve requested but the data carries noise weights");
  }
  if (truth != nullptr) {
    if (truth->images.size() != d.contrasts()) fail_invalid("ground truth contrast count mismatch");
    for (const ComplexGrid& u : truth->images) {
      if (!d.mask().matches(u)) fail_invalid("ground truth shape does not match the data");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolverResult result;
  result.tau = cfg.tau.value_or(step_size_auto(d));
  const double threshold = result.tau * cfg.alpha;
  const std::size_t m = d.contrasts();
  const std::size_t ncomp = 2 * m;
  result.trace.error_columns = truth != nullptr ? m : 0;

  JacobianField v = v0;
  if (cfg.domain == Domain::Real) {
    for (ComplexGrid& g : v.grids()) {
      for (cplx& z : g.values()) z = z.real();
    }
  }
  JacobianField w = v;
  JacobianField next(d.rows(), d.cols(), m);
  ComplexGrid scratch(d.rows(), d.cols());
  std::vector<ComplexGrid> spectra(ncomp, ComplexGrid(d.rows(), d.cols()));

  auto record = [&](int iter, const JacobianField& x) {
    TraceRecord rec;
    rec.iter = iter;
    rec.objective = std::numeric_limits<double>::quiet_NaN();
    if (cfg.record_objective || truth != nullptr) {
      for (std::size_t c = 0; c < ncomp; ++c) {
        spectra[c] = x.grids()[c];
        dft2_inplace(spectra[c]);
      }
    }
    if (cfg.record_objective) {
      rec.objective = cfg.alpha * regularizer(x, cfg) + fidelity_from_spectra(spectra, d);
    }
    if (truth != nullptr) {
      const AssemblyConfig acfg{truth->beta};
      for (std::size_t j = 0; j < m; ++j) {
        const ComplexGrid u = assemble_from_spectra(spectra[JacobianField::index(Axis::Rows, j)],
                                                    spectra[JacobianField::index(Axis::Cols, j)],
                                                    d.kspace()[j], d.mask(), acfg);
        rec.relerr.push_back(relative_error(u, truth->images[j]));
      }
    }
    rec.seconds = elapsed();
    result.trace.records.push_back(std::move(rec));
  };

  record(0, v);
  double t = 1.0;
  for (int k = 0; k < cfg.max_iters; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      for (Axis a : kAxes) {
        const std::size_t c = JacobianField::index(a, j);
        weighted_residual(w.grids()[c], d.derivative(a, j), d.residual_weights(a), scratch);
        idft2_inplace(scratch);
        const ComplexGrid& wc = w.grids()[c];
        ComplexGrid& out = next.grids()[c];
        if (cfg.domain == Domain::Real) {
          for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = wc[i].real() - result.tau * scratch[i].real();
          }
        } else {
          for (std::size_t i = 0; i < out.size(); ++i) out[i] = wc[i] - result.tau * scratch[i];
        }
      }
    }
    apply_prox(next, cfg, threshold);

    for (const ComplexGrid& g : next.grids()) {
      for (const cplx& z : g.values()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          fail_numerical("non-finite iterate at iteration " + std::to_string(k + 1) +
                         " (step size tau=" + std::to_string(result.tau) + " too large?)");
        }
      }
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t c = 0; c < ncomp; ++c) {
      const ComplexGrid& vn = next.grids()[c];
      const ComplexGrid& vo = v.grids()[c];
      ComplexGrid& wc = w.grids()[c];
      for (std::size_t i = 0; i < vn.size(); ++i) {
        const cplx delta = vn[i] - vo[i];
        diff2 += std::norm(delta);
        norm2 += std::norm(vo[i]);
        wc[i] = vn[i] + momentum * delta;
      }
    }
    std::swap(v, next);
    t = t_next;
    result.iterations = k + 1;
    record(k + 1, v);

    constexpr double kNormFloor = 1e-30;
    if (std::sqrt(diff2) / std::max(std::sqrt(norm2), kNormFloor) < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  result.seconds = elapsed();
  result.v = std::move(v);
  return result;
}

}  // namespace edgerecon
