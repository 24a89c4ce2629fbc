// Trace CSV and report JSON serialization.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>

#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"
#include "json.hpp"

namespace edgerecon {

namespace {

using ordered_json = nlohmann::ordered_json;

void append_double(std::string& out, double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) fail_invalid("failed to format a floating-point value");
  out.append(buf, end);
}

double parse_double(std::string_view s, std::size_t line) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) {
    fail_invalid("trace CSV line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail_io("failed writing " + path.string());
}

}  // namespace

std::string format_trace_csv(const SolverTrace& trace) {
  std::string out = "iter,seconds,objective";
  for (std::size_t j = 1; j <= trace.error_columns; ++j) out += ",relerr_" + std::to_string(j);
  out += '\n';
  for (const TraceRecord& r : trace.records) {
    if (r.relerr.size() != trace.error_columns) {
      fail_invalid("trace record has " + std::to_string(r.relerr.size()) + " error columns, expected " +
                   std::to_string(trace.error_columns));
    }
    out += std::to_string(r.iter);
    out += ',';
    append_double(out, r.seconds);
    out += ',';
    append_double(out, r.objective);
    for (double e : r.relerr) {
      out += ',';
      append_double(out, e);
    }
    out += '\n';
  }
  return out;
}

SolverTrace parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail_invalid("trace CSV is empty");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "iter" || header[1] != "seconds" || header[2] != "objective") {
    fail_invalid("trace CSV header must start with iter,seconds,objective");
  }
  SolverTrace trace;
  trace.error_columns = header.size() - 3;
  for (std::size_t j = 0; j < trace.error_columns; ++j) {
    if (header[3 + j] != "relerr_" + std::to_string(j + 1)) {
      fail_invalid("trace CSV header column " + std::to_string(4 + j) + " must be relerr_" +
                   std::to_string(j + 1));
    }
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      fail_invalid("trace CSV line " + std::to_string(lineno) + ": wrong column count");
    }
    TraceRecord r;
    auto [end, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.iter);
    if (ec != std::errc() || end != fields[0].data() + fields[0].size()) {
      fail_invalid("trace CSV line " + std::to_string(lineno) + ": bad iteration index");
    }
    r.seconds = parse_double(fields[1], lineno);
    r.objective = parse_double(fields[2], lineno);
    for (std::size_t j = 3; j < fields.size(); ++j) r.relerr.push_back(parse_double(fields[j], lineno));
    trace.records.push_back(std::move(r));
  }
  return trace;
}

void write_trace_csv(const SolverTrace& trace, const std::filesystem::path& path) {
  write_text(path, format_trace_csv(trace));
}

SolverTrace read_trace_csv(const std::filesystem::path& path) {
  return parse_trace_csv(read_text(path));
}

std::string format_report_json(const EvalReport& report) {
  if (report.psnr_db.size() != report.relative_error.size()) {
    fail_invalid("report has mismatched relative_error and psnr_db lengths");
  }
  ordered_json j;
  j["method"] = report.method;
  j["norm"] = report.norm;
  j["mask"] = report.mask;
  j["mask_ratio"] = report.mask_ratio;
  j["sigma"] = report.sigma;
  j["seed"] = report.seed;
  j["contrasts"] = report.relative_error.size();
  j["relative_error"] = report.relative_error;
  ordered_json psnr = ordered_json::array();
  for (double p : report.psnr_db) {
    if (std::isfinite(p)) {
      psnr.push_back(p);
    } else {
      psnr.push_back(nullptr);
    }
  }
  j["psnr_db"] = std::move(psnr);
  j["seconds"] = report.seconds;
  j["iterations"] = report.iterations;
  return j.dump(2) + "\n";
}

EvalReport parse_report_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_invalid(std::string("report JSON does not parse: ") + e.what());
  }
  try {
    EvalReport r;
    r.method = j.at("method").get<std::string>();
    r.norm = j.at("norm").get<std::string>();
    r.mask = j.at("mask").get<std::string>();
    r.mask_ratio = j.at("mask_ratio").get<double>();
    r.sigma = j.at("sigma").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.relative_error = j.at("relative_error").get<std::vector<double>>();
    for (const auto& p : j.at("psnr_db")) {
      r.psnr_db.push_back(p.is_null() ? std::numeric_limits<double>::infinity() : p.get<double>());
    }
    r.seconds = j.at("seconds").get<double>();
    r.iterations = j.at("iterations").get<int>();
    if (j.at("contrasts").get<std::size_t>() != r.relative_error.size() ||
        r.psnr_db.size() != r.relative_error.size()) {
      fail_invalid("report JSON: contrasts, relative_error and psnr_db disagree in length");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail_invalid(std::string("report JSON is missing or mistypes a field: ") + e.what());
  }
}

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
  write_text(path, format_report_json(report));
}

EvalReport read_report_json(const std::filesystem::path& path) {
  return parse_report_json(read_text(path));
}

}  // namespace edgerecon
