#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edgerecon/grid.hpp"
#include "edgerecon/trace.hpp"

namespace edgerecon {

// || |u| - |u*| ||_F / ||u*||_F on magnitudes. Throws when u* is zero.
double relative_error(const ComplexGrid& u, const ComplexGrid& reference);

// 20 log10(max|u*| / RMSE) on magnitudes; +infinity when RMSE is zero.
double psnr(const ComplexGrid& u, const ComplexGrid& reference);

struct EvalReport {
  std::string method;
  std::string norm;
  std::string mask;
  double mask_ratio = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> relative_error;
  std::vector<double> psnr_db;  // +infinity is serialized as null
  double seconds = 0.0;
  int iterations = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// "iter,seconds,objective,relerr_1,...,relerr_m", shortest round-trip
// formatting for every value.
std::string format_trace_csv(const SolverTrace& trace);
SolverTrace parse_trace_csv(const std::string& text);
void write_trace_csv(const SolverTrace& trace, const std::filesystem::path& path);
SolverTrace read_trace_csv(const std::filesystem::path& path);

std::string format_report_json(const EvalReport& report);
EvalReport parse_report_json(const std::string& text);
void write_report_json(const EvalReport& report, const std::filesystem::path& path);
EvalReport read_report_json(const std::filesystem::path& path);

// 8-bit grayscale PNGs. Magnitudes are min-max normalized per image; signed
// errors |u| - |u*| map symmetrically so zero error is mid-gray.
void write_magnitude_png(const ComplexGrid& image, const std::filesystem::path& path);
void write_error_png(const ComplexGrid& image, const ComplexGrid& reference,
                     const std::filesystem::path& path);
void write_mask_png(const SamplingMask& mask, const std::filesystem::path& path);

}  // namespace edgerecon
