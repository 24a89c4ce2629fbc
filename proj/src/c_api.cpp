#include "edgerecon/edgerecon.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "edgerecon/cgrid_io.hpp"
#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"
#include "edgerecon/pipeline.hpp"
#include "edgerecon/scene.hpp"

struct er_stack {
  std::vector<edgerecon::ComplexGrid> grids;
};

struct er_mask {
  edgerecon::SamplingMask mask;
};

struct er_trace {
  edgerecon::SolverTrace trace;
};

namespace {

using namespace edgerecon;

thread_local std::string g_last_error;

er_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return ER_ERR_INVALID;
    case ErrorKind::Numerical: return ER_ERR_NUMERICAL;
    case ErrorKind::Io: return ER_ERR_IO;
  }
  return ER_ERR_NUMERICAL;
}

template <class F>
er_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ER_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ER_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ER_ERR_NUMERICAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) fail_invalid(std::string(name) + " is NULL");
}

std::size_t positive(int32_t v, const char* name) {
  if (v <= 0) fail_invalid(std::string(name) + " must be positive, got " + std::to_string(v));
  return static_cast<std::size_t>(v);
}

const ComplexGrid& contrast_of(const er_stack* s, int32_t j) {
  require(s, "stack");
  if (j < 0 || static_cast<std::size_t>(j) >= s->grids.size()) {
    fail_invalid("contrast index " + std::to_string(j) + " out of range [0, " +
                 std::to_string(s->grids.size()) + ")");
  }
  return s->grids[static_cast<std::size_t>(j)];
}

MatrixNorm norm_of(er_norm n) {
  switch (n) {
    case ER_NORM_FROBENIUS: return MatrixNorm::Frobenius;
    case ER_NORM_SPECTRAL: return MatrixNorm::Spectral;
    case ER_NORM_NUCLEAR: return MatrixNorm::Nuclear;
  }
  fail_invalid("unknown norm id " + std::to_string(static_cast<int>(n)));
}

Method method_of(er_method m) {
  switch (m) {
    case ER_METHOD_ER: return Method::EdgeJoint;
    case ER_METHOD_ER_WEIGHTED: return Method::EdgeJointWeighted;
    case ER_METHOD_ZERO_FILL: return Method::ZeroFill;
    case ER_METHOD_INDEPENDENT: return Method::Independent;
  }
  fail_invalid("unknown method id " + std::to_string(static_cast<int>(m)));
}

}  // namespace

extern "C" {

const char* er_last_error(void) { return g_last_error.c_str(); }

er_status er_stack_create(int32_t rows, int32_t cols, int32_t contrasts, er_stack** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const std::size_t r = positive(rows, "rows"), c = positive(cols, "cols");
    const std::size_t m = positive(contrasts, "contrasts");
    auto s = std::make_unique<er_stack>();
    for (std::size_t j = 0; j < m; ++j) s->grids.emplace_back(r, c);
    *out = s.release();
  });
}

void er_stack_destroy(er_stack* stack) { delete stack; }

er_status er_stack_shape(const er_stack* stack, int32_t* rows, int32_t* cols, int32_t* contrasts) {
  return guarded([&] {
    const ComplexGrid& g = contrast_of(stack, 0);
    if (rows) *rows = static_cast<int32_t>(g.rows());
    if (cols) *cols = static_cast<int32_t>(g.cols());
    if (contrasts) *contrasts = static_cast<int32_t>(stack->grids.size());
  });
}

er_status er_stack_data(er_stack* stack, int32_t contrast, double** data) {
  return guarded([&] {
    require(data, "data");
    auto& g = const_cast<ComplexGrid&>(contrast_of(stack, contrast));
    // std::complex<double> is layout-compatible with double[2]
    *data = reinterpret_cast<double*>(g.values().data());
  });
}

er_status er_stack_read(const char* path, er_stack** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto s = std::make_unique<er_stack>();
    s->grids = read_cgrid(path);
    *out = s.release();
  });
}

er_status er_stack_write(const er_stack* stack, const char* path) {
  return guarded([&] {
    require(stack, "stack");
    require(path, "path");
    write_cgrid(path, stack->grids);
  });
}

er_status er_stack_write_png(const er_stack* stack, int32_t contrast, const char* path) {
  return guarded([&] {
    require(path, "path");
    write_magnitude_png(contrast_of(stack, contrast), path);
  });
}

er_status er_stack_write_error_png(const er_stack* image, const er_stack* reference,
                                   int32_t contrast, const char* path) {
  return guarded([&] {
    require(path, "path");
    write_error_png(contrast_of(image, contrast), contrast_of(reference, contrast), path);
  });
}

er_status er_phantom_create(er_phantom_kind kind, int32_t rows, int32_t cols, int32_t contrasts,
                            er_stack** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    PhantomKind k{};
    switch (kind) {
      case ER_PHANTOM_SHEPP_LOGAN: k = PhantomKind::SheppLogan; break;
      case ER_PHANTOM_BRAIN_LIKE: k = PhantomKind::BrainLike; break;
      default: fail_invalid("unknown phantom id " + std::to_string(static_cast<int>(kind)));
    }
    auto s = std::make_unique<er_stack>();
    s->grids = make_phantom(k, positive(rows, "rows"), positive(cols, "cols"),
                            positive(contrasts, "contrasts"));
    *out = s.release();
  });
}

er_status er_mask_create(er_mask_kind kind, int32_t rows, int32_t cols, double ratio,
                         uint64_t seed, er_mask** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    MaskKind k{};
    switch (kind) {
      case ER_MASK_RADIAL: k = MaskKind::Radial; break;
      case ER_MASK_POISSON: k = MaskKind::Poisson; break;
      case ER_MASK_FULL: k = MaskKind::Full; break;
      default: fail_invalid("unknown mask id " + std::to_string(static_cast<int>(kind)));
    }
    auto m = std::make_unique<er_mask>();
    m->mask = make_mask(k, positive(rows, "rows"), positive(cols, "cols"), ratio, seed);
    *out = m.release();
  });
}

void er_mask_destroy(er_mask* mask) { delete mask; }

er_status er_mask_shape(const er_mask* mask, int32_t* rows, int32_t* cols) {
  return guarded([&] {
    require(mask, "mask");
    if (rows) *rows = static_cast<int32_t>(mask->mask.rows());
    if (cols) *cols = static_cast<int32_t>(mask->mask.cols());
  });
}

er_status er_mask_ratio(const er_mask* mask, double* ratio) {
  return guarded([&] {
    require(mask, "mask");
    require(ratio, "ratio");
    *ratio = mask->mask.ratio();
  });
}

er_status er_mask_read(const char* path, er_mask** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<er_mask>();
    m->mask = read_mask_cgrid(path);
    *out = m.release();
  });
}

er_status er_mask_write(const er_mask* mask, const char* path) {
  return guarded([&] {
    require(mask, "mask");
    require(path, "path");
    write_mask_cgrid(path, mask->mask);
  });
}

er_status er_mask_write_png(const er_mask* mask, const char* path) {
  return guarded([&] {
    require(mask, "mask");
    require(path, "path");
    write_mask_png(mask->mask, path);
  });
}

er_status er_simulate(const er_stack* truth, const er_mask* mask, double sigma, uint64_t seed,
                      er_stack** kspace) {
  return guarded([&] {
    require(truth, "truth");
    require(mask, "mask");
    require(kspace, "kspace");
    *kspace = nullptr;
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      fail_invalid("sigma must be finite and >= 0");
    }
    auto s = std::make_unique<er_stack>();
    s->grids = simulate_kspace(truth->grids, mask->mask, NoiseSpec{sigma, seed});
    *kspace = s.release();
  });
}

void er_recon_options_init(er_recon_options* options) {
  if (options == nullptr) return;
  const SolverConfig cfg;
  options->method = ER_METHOD_ER;
  options->norm = ER_NORM_FROBENIUS;
  options->alpha = cfg.alpha;
  options->beta = ReconOptions{}.beta;
  options->tau = 0.0;
  options->tol = cfg.tol;
  options->weight_cap = cfg.weight_cap;
  options->max_iters = cfg.max_iters;
  options->zero_init = 0;
  options->record_objective = cfg.record_objective ? 1 : 0;
}

er_status er_reconstruct(const er_stack* kspace, const er_mask* mask,
                         const er_recon_options* options, const er_stack* truth,
                         er_stack** image, er_trace** trace) {
  return guarded([&] {
    require(kspace, "kspace");
    require(mask, "mask");
    require(options, "options");
    require(image, "image");
    *image = nullptr;
    if (trace) *trace = nullptr;

    ReconOptions opt;
    opt.method = method_of(options->method);
    opt.solver.norm = norm_of(options->norm);
    opt.solver.alpha = options->alpha;
    if (options->tau > 0.0) opt.solver.tau = options->tau;
    opt.solver.tol = options->tol;
    opt.solver.weight_cap = options->weight_cap;
    opt.solver.max_iters = options->max_iters;
    opt.solver.record_objective = options->record_objective != 0;
    opt.beta = options->beta;
    opt.zero_init = options->zero_init != 0;
    if (!(opt.beta > 0.0) || !std::isfinite(opt.beta)) {
      fail_invalid("beta must be finite and > 0");
    }

    ReconResult res =
        reconstruct(kspace->grids, mask->mask, opt, truth ? &truth->grids : nullptr);
    auto img = std::make_unique<er_stack>();
    img->grids = std::move(res.images);
    std::unique_ptr<er_trace> tr;
    if (trace) {
      tr = std::make_unique<er_trace>();
      tr->trace = std::move(res.trace);
    }
    *image = img.release();
    if (trace) *trace = tr.release();
  });
}

void er_trace_destroy(er_trace* trace) { delete trace; }

size_t er_trace_length(const er_trace* trace) {
  return trace ? trace->trace.records.size() : 0;
}

int32_t er_trace_error_columns(const er_trace* trace) {
  return trace ? static_cast<int32_t>(trace->trace.error_columns) : 0;
}

er_status er_trace_record(const er_trace* trace, size_t index, int32_t* iter, double* seconds,
                          double* objective, double* relerr) {
  return guarded([&] {
    require(trace, "trace");
    if (index >= trace->trace.records.size()) {
      fail_invalid("trace index " + std::to_string(index) + " out of range");
    }
    const TraceRecord& r = trace->trace.records[index];
    if (iter) *iter = r.iter;
    if (seconds) *seconds = r.seconds;
    if (objective) *objective = r.objective;
    if (relerr) {
      for (std::size_t j = 0; j < r.relerr.size(); ++j) relerr[j] = r.relerr[j];
    }
  });
}

er_status er_trace_write_csv(const er_trace* trace, const char* path) {
  return guarded([&] {
    require(trace, "trace");
    require(path, "path");
    write_trace_csv(trace->trace, path);
  });
}

er_status er_trace_read_csv(const char* path, er_trace** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto t = std::make_unique<er_trace>();
    t->trace = read_trace_csv(path);
    *out = t.release();
  });
}

er_status er_relative_error(const er_stack* image, const er_stack* reference, int32_t contrast,
                            double* out) {
  return guarded([&] {
    require(out, "out");
    *out = relative_error(contrast_of(image, contrast), contrast_of(reference, contrast));
  });
}

er_status er_psnr(const er_stack* image, const er_stack* reference, int32_t contrast,
                  double* out) {
  return guarded([&] {
    require(out, "out");
    *out = psnr(contrast_of(image, contrast), contrast_of(reference, contrast));
  });
}

er_status er_report_write_json(const er_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    require(path, "path");
    const std::size_t m = positive(report->contrasts, "contrasts");
    require(report->relative_error, "relative_error");
    require(report->psnr_db, "psnr_db");
    EvalReport r;
    r.method = report->method ? report->method : "";
    r.norm = report->norm ? report->norm : "";
    r.mask = report->mask ? report->mask : "";
    r.mask_ratio = report->mask_ratio;
    r.sigma = report->sigma;
    r.seed = report->seed;
    r.relative_error.assign(report->relative_error, report->relative_error + m);
    r.psnr_db.assign(report->psnr_db, report->psnr_db + m);
    r.seconds = report->seconds;
    r.iterations = report->iterations;
    write_report_json(r, path);
  });
}

}  // extern "C"
