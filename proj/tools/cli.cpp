#include "cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "edgerecon/edgerecon.h"
#include "json.hpp"

namespace edgerecon_cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& msg) { throw CliError{kExitConfig, msg}; }
[[noreturn]] void io_error(const std::string& msg) { throw CliError{kExitIo, msg}; }

void check(er_status s, const std::string& context) {
  if (s != ER_OK) throw CliError{static_cast<int>(s), context + ": " + er_last_error()};
}

struct StackDeleter {
  void operator()(er_stack* p) const { er_stack_destroy(p); }
};
struct MaskDeleter {
  void operator()(er_mask* p) const { er_mask_destroy(p); }
};
struct TraceDeleter {
  void operator()(er_trace* p) const { er_trace_destroy(p); }
};
using Stack = std::unique_ptr<er_stack, StackDeleter>;
using Mask = std::unique_ptr<er_mask, MaskDeleter>;
using Trace = std::unique_ptr<er_trace, TraceDeleter>;

// ---- settings ------------------------------------------------------------

struct Settings {
  std::string phantom = "shepp-logan";
  int rows = 256;
  int cols = 256;
  int contrasts = 3;
  std::string mask = "radial";
  double ratio = 0.135;
  std::uint64_t seed = 1;
  double sigma = 0.0;
  std::string method = "er";
  std::string norm = "fro";
  double alpha = 1e-3;
  double beta = 1e-3;
  double tau = 0.0;  // <= 0: auto
  int max_iters = 300;
  double tol = 1e-6;
  double weight_cap = 25.0;
  std::string out = "out";
  std::string name = "experiment";
  std::vector<std::string> norms{"fro", "spec", "nuc"};
  std::vector<std::string> methods{"er", "er-weighted", "zero-fill", "independent"};
  std::vector<double> sigmas{0.0};

  fs::path dir() const { return fs::path(out) / name; }
};

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc() ? end : buf);
}

std::string size_string(int rows, int cols) {
  return rows == cols ? std::to_string(rows) : std::to_string(rows) + "x" + std::to_string(cols);
}

json to_json(const Settings& s) {
  json j;
  j["phantom"] = s.phantom;
  j["size"] = size_string(s.rows, s.cols);
  j["contrasts"] = s.contrasts;
  j["mask"] = s.mask;
  j["ratio"] = s.ratio;
  j["seed"] = s.seed;
  j["sigma"] = s.sigma;
  j["method"] = s.method;
  j["norm"] = s.norm;
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["tau"] = s.tau > 0.0 ? json(s.tau) : json("auto");
  j["max_iters"] = s.max_iters;
  j["tol"] = s.tol;
  j["weight_cap"] = s.weight_cap;
  j["out"] = s.out;
  j["name"] = s.name;
  j["norms"] = s.norms;
  j["methods"] = s.methods;
  j["sigmas"] = s.sigmas;
  return j;
}

// Config keys and the flags that set them.
const std::map<std::string, std::string>& flag_names() {
  static const std::map<std::string, std::string> names = {
      {"phantom", "--phantom"},     {"size", "--size"},         {"contrasts", "--contrasts"},
      {"mask", "--mask"},           {"ratio", "--ratio"},       {"seed", "--seed"},
      {"sigma", "--sigma"},         {"method", "--method"},     {"norm", "--norm"},
      {"alpha", "--alpha"},         {"beta", "--beta"},         {"tau", "--tau"},
      {"max_iters", "--max-iters"}, {"tol", "--tol"},           {"weight_cap", "--weight-cap"},
      {"out", "--out"},             {"name", "--name"},         {"norms", "--norms"},
      {"methods", "--methods"},     {"sigmas", "--sigmas"}};
  return names;
}

std::string flag_of(const std::string& key) {
  const auto it = flag_names().find(key);
  return it == flag_names().end() ? key : it->second;
}

double parse_number(const std::string& key, const std::string& text) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(x)) {
    config_error(flag_of(key) + ": expected a number, got '" + text + "'");
  }
  return x;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long x = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    config_error(flag_of(key) + ": expected an integer, got '" + text + "'");
  }
  return x;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double number_of(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(key, j.get<std::string>());
  config_error(flag_of(key) + ": expected a number");
}

long long integer_of(const json& j, const std::string& key) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<long long>();
  if (j.is_string()) return parse_integer(key, j.get<std::string>());
  config_error(flag_of(key) + ": expected an integer");
}

std::string string_of(const json& j, const std::string& key) {
  if (j.is_string()) return j.get<std::string>();
  config_error(flag_of(key) + ": expected a string");
}

void require_one_of(const std::string& key, const std::string& value,
                    std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (value == a) return;
    list += list.empty() ? a : std::string("|") + a;
  }
  config_error(flag_of(key) + ": unknown value '" + value + "' (expected " + list + ")");
}

void apply_patch(Settings& s, const json& patch) {
  if (!patch.is_object()) config_error("configuration must be a JSON object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "phantom") {
      s.phantom = string_of(v, key);
      require_one_of(key, s.phantom, {"shepp-logan", "brain-like"});
    } else if (key == "size") {
      const std::string text = v.is_string() ? v.get<std::string>() : std::to_string(integer_of(v, key));
      const auto x = text.find('x');
      const long long r = parse_integer(key, text.substr(0, x));
      const long long c = x == std::string::npos ? r : parse_integer(key, text.substr(x + 1));
      if (r < 2 || c < 2 || r > 8192 || c > 8192) {
        config_error("--size must be N or RxC with sides in [2, 8192], got '" + text + "'");
      }
      s.rows = static_cast<int>(r);
      s.cols = static_cast<int>(c);
    } else if (key == "contrasts") {
      const long long m = integer_of(v, key);
      if (m < 1 || m > 64) config_error("--contrasts must be in [1, 64], got " + std::to_string(m));
      s.contrasts = static_cast<int>(m);
    } else if (key == "mask") {
      s.mask = string_of(v, key);
      require_one_of(key, s.mask, {"radial", "poisson", "full"});
    } else if (key == "ratio") {
      s.ratio = number_of(v, key);
      if (!(s.ratio > 0.0 && s.ratio <= 1.0)) {
        config_error("--ratio must be in (0, 1], got " + format_double(s.ratio));
      }
    } else if (key == "seed") {
      const long long seed = integer_of(v, key);
      if (seed < 0) config_error("--seed must be >= 0");
      s.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "sigma") {
      s.sigma = number_of(v, key);
      if (s.sigma < 0.0) config_error("--sigma must be >= 0, got " + format_double(s.sigma));
    } else if (key == "method") {
      s.method = string_of(v, key);
      require_one_of(key, s.method, {"er", "er-weighted", "zero-fill", "independent"});
    } else if (key == "norm") {
      s.norm = string_of(v, key);
      require_one_of(key, s.norm, {"fro", "spec", "nuc"});
    } else if (key == "alpha") {
      s.alpha = number_of(v, key);
      if (!(s.alpha > 0.0)) config_error("--alpha must be > 0, got " + format_double(s.alpha));
    } else if (key == "beta") {
      s.beta = number_of(v, key);
      if (!(s.beta > 0.0)) config_error("--beta must be > 0, got " + format_double(s.beta));
    } else if (key == "tau") {
      if (v.is_string() && v.get<std::string>() == "auto") {
        s.tau = 0.0;
      } else {
        s.tau = number_of(v, key);
        if (!(s.tau > 0.0)) config_error("--tau must be 'auto' or > 0, got " + format_double(s.tau));
      }
    } else if (key == "max_iters") {
      const long long n = integer_of(v, key);
      if (n < 1 || n > 10000000) config_error("--max-iters must be >= 1, got " + std::to_string(n));
      s.max_iters = static_cast<int>(n);
    } else if (key == "tol") {
      s.tol = number_of(v, key);
      if (!(s.tol >= 0.0)) config_error("--tol must be >= 0, got " + format_double(s.tol));
    } else if (key == "weight_cap") {
      s.weight_cap = number_of(v, key);
      if (!(s.weight_cap > 0.0)) {
        config_error("--weight-cap must be > 0, got " + format_double(s.weight_cap));
      }
    } else if (key == "out") {
      s.out = string_of(v, key);
      if (s.out.empty()) config_error("--out must not be empty");
    } else if (key == "name") {
      s.name = string_of(v, key);
      if (s.name.empty() || s.name.find('/') != std::string::npos) {
        config_error("--name must be a non-empty directory name, got '" + s.name + "'");
      }
    } else if (key == "norms" || key == "methods") {
      std::vector<std::string> list;
      if (v.is_string()) {
        list = split_list(v.get<std::string>());
      } else if (v.is_array()) {
        for (const json& e : v) list.push_back(string_of(e, key));
      } else {
        config_error(flag_of(key) + ": expected a list");
      }
      if (list.empty()) config_error(flag_of(key) + " must not be empty");
      for (const std::string& e : list) {
        if (key == "norms") {
          require_one_of(key, e, {"fro", "spec", "nuc"});
        } else {
          require_one_of(key, e, {"er", "er-weighted", "zero-fill", "independent"});
        }
      }
      (key == "norms" ? s.norms : s.methods) = list;
    } else if (key == "sigmas") {
      std::vector<double> list;
      if (v.is_string()) {
        for (const std::string& e : split_list(v.get<std::string>())) list.push_back(parse_number(key, e));
      } else if (v.is_array()) {
        for (const json& e : v) list.push_back(number_of(e, key));
      } else if (v.is_number()) {
        list.push_back(v.get<double>());
      } else {
        config_error("--sigmas: expected a list of numbers");
      }
      if (list.empty()) config_error("--sigmas must not be empty");
      for (double x : list) {
        if (x < 0.0) config_error("--sigmas values must be >= 0, got " + format_double(x));
      }
      s.sigmas = list;
    } else {
      config_error("unknown configuration key '" + key + "'");
    }
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) io_error("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void make_dirs(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) io_error("cannot create directory " + p.string() + ": " + ec.message());
}

// ---- command-line plumbing -------------------------------------------------

// Raw flag values as typed; turned into a JSON patch after parsing so that
// flags and config files share one validation path.
struct FlagSet {
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> values;
  std::string config;

  void add(CLI::App* app, const std::string& key, const std::string& flag, const std::string& help) {
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }

  json patch() const {
    json p = json::object();
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) p[key] = values.at(key);
    }
    return p;
  }
};

Settings resolve(const FlagSet& flags) {
  const json cli = flags.patch();
  json file = json::object();
  if (!flags.config.empty()) file = read_json_file(flags.config);

  // out/name locate the experiment manifest, which sits below files and flags
  Settings probe;
  apply_patch(probe, file);
  apply_patch(probe, cli);
  Settings s;
  const fs::path manifest = probe.dir() / "config.json";
  if (fs::exists(manifest)) apply_patch(s, read_json_file(manifest));
  apply_patch(s, file);
  apply_patch(s, cli);
  return s;
}

void save_manifest(const Settings& s) {
  make_dirs(s.dir());
  write_text(s.dir() / "config.json", to_json(s).dump(2) + "\n");
}

er_phantom_kind phantom_kind(const std::string& name) {
  return name == "brain-like" ? ER_PHANTOM_BRAIN_LIKE : ER_PHANTOM_SHEPP_LOGAN;
}

er_mask_kind mask_kind(const std::string& name) {
  if (name == "poisson") return ER_MASK_POISSON;
  if (name == "full") return ER_MASK_FULL;
  return ER_MASK_RADIAL;
}

er_method method_id(const std::string& name) {
  if (name == "er-weighted") return ER_METHOD_ER_WEIGHTED;
  if (name == "zero-fill") return ER_METHOD_ZERO_FILL;
  if (name == "independent") return ER_METHOD_INDEPENDENT;
  return ER_METHOD_ER;
}

er_norm norm_id(const std::string& name) {
  if (name == "spec") return ER_NORM_SPECTRAL;
  if (name == "nuc") return ER_NORM_NUCLEAR;
  return ER_NORM_FROBENIUS;
}

std::string run_tag(const std::string& method, const std::string& norm) {
  return method == "zero-fill" ? method : method + "_" + norm;
}

Stack read_stack(const fs::path& path) {
  if (!fs::exists(path)) io_error("missing input " + path.string());
  er_stack* s = nullptr;
  check(er_stack_read(path.c_str(), &s), path.string());
  return Stack(s);
}

Mask read_mask(const fs::path& path) {
  if (!fs::exists(path)) io_error("missing input " + path.string());
  er_mask* m = nullptr;
  check(er_mask_read(path.c_str(), &m), path.string());
  return Mask(m);
}

std::array<int, 3> shape_of(const er_stack* s) {
  std::array<int32_t, 3> shape{};
  check(er_stack_shape(s, &shape[0], &shape[1], &shape[2]), "stack shape");
  return {shape[0], shape[1], shape[2]};
}

Stack make_phantom(const Settings& s) {
  er_stack* p = nullptr;
  check(er_phantom_create(phantom_kind(s.phantom), s.rows, s.cols, s.contrasts, &p), "--phantom");
  return Stack(p);
}

Mask make_mask(const Settings& s) {
  er_mask* m = nullptr;
  check(er_mask_create(mask_kind(s.mask), s.rows, s.cols, s.ratio, s.seed, &m), "--mask/--ratio");
  return Mask(m);
}

Stack simulate(const er_stack* truth, const er_mask* mask, const Settings& s) {
  er_stack* k = nullptr;
  check(er_simulate(truth, mask, s.sigma, s.seed, &k), "--sigma");
  return Stack(k);
}

void write_stack_pngs(const er_stack* s, const fs::path& dir, const std::string& stem) {
  const int m = shape_of(s)[2];
  for (int j = 0; j < m; ++j) {
    const fs::path p = dir / (stem + "_" + std::to_string(j + 1) + ".png");
    check(er_stack_write_png(s, j, p.c_str()), p.string());
  }
}

struct Metrics {
  std::vector<double> relerr;
  std::vector<double> psnr;
};

Metrics evaluate(const er_stack* image, const er_stack* truth) {
  const auto a = shape_of(image);
  const auto b = shape_of(truth);
  if (a != b) config_error("reconstruction and ground truth shapes differ");
  Metrics out;
  for (int j = 0; j < a[2]; ++j) {
    double e = 0.0, p = 0.0;
    check(er_relative_error(image, truth, j, &e), "relative error");
    check(er_psnr(image, truth, j, &p), "psnr");
    out.relerr.push_back(e);
    out.psnr.push_back(p);
  }
  return out;
}

void write_report(const fs::path& path, const Settings& s, const std::string& method,
                  const std::string& norm, double mask_ratio, const Metrics& m, double seconds,
                  int iterations) {
  er_report r{};
  r.method = method.c_str();
  r.norm = norm.c_str();
  r.mask = s.mask.c_str();
  r.mask_ratio = mask_ratio;
  r.sigma = s.sigma;
  r.seed = s.seed;
  r.contrasts = static_cast<int32_t>(m.relerr.size());
  r.relative_error = m.relerr.data();
  r.psnr_db = m.psnr.data();
  r.seconds = seconds;
  r.iterations = iterations;
  check(er_report_write_json(&r, path.c_str()), path.string());
}

er_recon_options recon_options(const Settings& s, const std::string& method, const std::string& norm) {
  er_recon_options o;
  er_recon_options_init(&o);
  o.method = method_id(method);
  o.norm = norm_id(norm);
  o.alpha = s.alpha;
  o.beta = s.beta;
  o.tau = s.tau;
  o.tol = s.tol;
  o.weight_cap = s.weight_cap;
  o.max_iters = s.max_iters;
  return o;
}

struct RunResult {
  Stack image;
  Trace trace;
  double seconds = 0.0;
  int iterations = 0;
};

RunResult reconstruct(const er_stack* kspace, const er_mask* mask, const er_stack* truth,
                      const Settings& s, const std::string& method, const std::string& norm) {
  const er_recon_options o = recon_options(s, method, norm);
  er_stack* image = nullptr;
  er_trace* trace = nullptr;
  const auto start = std::chrono::steady_clock::now();
  check(er_reconstruct(kspace, mask, &o, truth, &image, &trace), "reconstruction (" + method + ")");
  RunResult r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.image.reset(image);
  r.trace.reset(trace);
  const size_t n = er_trace_length(trace);
  if (n > 0) {
    int32_t iter = 0;
    check(er_trace_record(trace, n - 1, &iter, nullptr, nullptr, nullptr), "trace");
    r.iterations = iter;
  }
  return r;
}

// ---- commands ---------------------------------------------------------------

int cmd_phantom(const Settings& s) {
  const fs::path inputs = s.dir() / "inputs";
  make_dirs(inputs);
  const Stack p = make_phantom(s);
  check(er_stack_write(p.get(), (inputs / "phantom.cgrid").c_str()), (inputs / "phantom.cgrid").string());
  write_stack_pngs(p.get(), inputs, "phantom");
  save_manifest(s);
  std::cout << "phantom " << s.phantom << " " << s.rows << "x" << s.cols << "x" << s.contrasts
            << " -> " << (inputs / "phantom.cgrid").string() << "\n";
  return 0;
}

int cmd_mask(const Settings& s) {
  const fs::path inputs = s.dir() / "inputs";
  make_dirs(inputs);
  const Mask m = make_mask(s);
  check(er_mask_write(m.get(), (inputs / "mask.cgrid").c_str()), (inputs / "mask.cgrid").string());
  check(er_mask_write_png(m.get(), (inputs / "mask.png").c_str()), (inputs / "mask.png").string());
  save_manifest(s);
  double ratio = 0.0;
  check(er_mask_ratio(m.get(), &ratio), "mask ratio");
  std::cout << "mask " << s.mask << " ratio " << format_double(ratio) << " -> "
            << (inputs / "mask.cgrid").string() << "\n";
  return 0;
}

int cmd_simulate(const Settings& s) {
  const fs::path inputs = s.dir() / "inputs";
  const Stack truth = read_stack(inputs / "phantom.cgrid");
  const Mask mask = read_mask(inputs / "mask.cgrid");
  const Stack k = simulate(truth.get(), mask.get(), s);
  check(er_stack_write(k.get(), (inputs / "kspace.cgrid").c_str()), (inputs / "kspace.cgrid").string());
  save_manifest(s);
  std::cout << "simulate sigma " << format_double(s.sigma) << " seed " << s.seed << " -> "
            << (inputs / "kspace.cgrid").string() << "\n";
  return 0;
}

int cmd_recon(const Settings& s) {
  const fs::path dir = s.dir();
  const Stack kspace = read_stack(dir / "inputs" / "kspace.cgrid");
  const Mask mask = read_mask(dir / "inputs" / "mask.cgrid");
  Stack truth;
  if (fs::exists(dir / "inputs" / "phantom.cgrid")) truth = read_stack(dir / "inputs" / "phantom.cgrid");

  const RunResult r = reconstruct(kspace.get(), mask.get(), truth.get(), s, s.method, s.norm);
  const std::string tag = run_tag(s.method, s.norm);
  make_dirs(dir / "recon");
  make_dirs(dir / "traces");
  const fs::path image_path = dir / "recon" / (tag + ".cgrid");
  check(er_stack_write(r.image.get(), image_path.c_str()), image_path.string());
  write_stack_pngs(r.image.get(), dir / "recon", tag);
  const fs::path trace_path = dir / "traces" / (tag + ".csv");
  check(er_trace_write_csv(r.trace.get(), trace_path.c_str()), trace_path.string());

  double ratio = 0.0;
  check(er_mask_ratio(mask.get(), &ratio), "mask ratio");
  if (truth) {
    const int m = shape_of(truth.get())[2];
    for (int j = 0; j < m; ++j) {
      const fs::path p = dir / "recon" / (tag + "_error_" + std::to_string(j + 1) + ".png");
      check(er_stack_write_error_png(r.image.get(), truth.get(), j, p.c_str()), p.string());
    }
    const Metrics metrics = evaluate(r.image.get(), truth.get());
    write_report(dir / "report.json", s, s.method, s.norm, ratio, metrics, r.seconds, r.iterations);
    std::cout << tag << ":";
    for (double e : metrics.relerr) std::cout << " " << format_double(e);
    std::cout << " (" << r.iterations << " iterations)\n";
  } else {
    std::cout << tag << ": " << r.iterations << " iterations (no ground truth, report skipped)\n";
  }
  save_manifest(s);
  return 0;
}

int cmd_eval(const Settings& s, const std::string& report_arg) {
  const fs::path dir = s.dir();
  const fs::path report_path = report_arg.empty() ? dir / "report.json" : fs::path(report_arg);
  const json report = read_json_file(report_path);
  std::string method, norm;
  try {
    method = report.at("method").get<std::string>();
    norm = report.at("norm").get<std::string>();
  } catch (const json::exception& e) {
    config_error(report_path.string() + ": malformed report (" + e.what() + ")");
  }
  const fs::path image_path = dir / "recon" / (run_tag(method, norm) + ".cgrid");
  const Stack image = read_stack(image_path);
  const Stack truth = read_stack(dir / "inputs" / "phantom.cgrid");
  const Metrics metrics = evaluate(image.get(), truth.get());

  Settings r = s;
  try {
    r.mask = report.at("mask").get<std::string>();
    r.sigma = report.at("sigma").get<double>();
    r.seed = report.at("seed").get<std::uint64_t>();
    const fs::path eval_path = dir / "eval.json";
    write_report(eval_path, r, method, norm, report.at("mask_ratio").get<double>(), metrics,
                 report.at("seconds").get<double>(), report.at("iterations").get<int>());
    const bool same = read_text(eval_path) == read_text(report_path);
    std::cout << read_text(eval_path);
    std::cout << (same ? "eval: metrics match " : "eval: metrics DIFFER from ")
              << report_path.string() << "\n";
    return same ? 0 : kExitRuntime;
  } catch (const json::exception& e) {
    config_error(report_path.string() + ": malformed report (" + e.what() + ")");
  }
}

int cmd_sweep(const Settings& s) {
  const fs::path dir = s.dir();
  make_dirs(dir / "inputs");
  make_dirs(dir / "recon");
  make_dirs(dir / "traces");
  const Stack truth = make_phantom(s);
  const Mask mask = make_mask(s);
  check(er_stack_write(truth.get(), (dir / "inputs" / "phantom.cgrid").c_str()), "phantom.cgrid");
  check(er_mask_write(mask.get(), (dir / "inputs" / "mask.cgrid").c_str()), "mask.cgrid");
  double ratio = 0.0;
  check(er_mask_ratio(mask.get(), &ratio), "mask ratio");

  std::string csv = "norm,method,sigma";
  for (int j = 1; j <= s.contrasts; ++j) csv += ",relerr_" + std::to_string(j);
  for (int j = 1; j <= s.contrasts; ++j) csv += ",psnr_db_" + std::to_string(j);
  csv += ",iterations,seconds\n";

  for (double sigma : s.sigmas) {
    Settings point = s;
    point.sigma = sigma;
    const Stack kspace = simulate(truth.get(), mask.get(), point);
    for (const std::string& method : s.methods) {
      for (const std::string& norm : s.norms) {
        const RunResult r = reconstruct(kspace.get(), mask.get(), truth.get(), point, method, norm);
        const Metrics m = evaluate(r.image.get(), truth.get());
        const std::string tag = run_tag(method, norm) + "_sigma" + format_double(sigma);
        const fs::path trace_path = dir / "traces" / (tag + ".csv");
        check(er_trace_write_csv(r.trace.get(), trace_path.c_str()), trace_path.string());
        csv += norm + "," + method + "," + format_double(sigma);
        for (double e : m.relerr) csv += "," + format_double(e);
        for (double p : m.psnr) csv += "," + (std::isfinite(p) ? format_double(p) : std::string("inf"));
        csv += "," + std::to_string(r.iterations) + "," + format_double(r.seconds) + "\n";
        std::cout << tag << ":";
        for (double e : m.relerr) std::cout << " " << format_double(e);
        std::cout << "\n";
      }
    }
  }
  write_text(dir / "sweep.csv", csv);
  save_manifest(s);
  std::cout << "sweep -> " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

void add_common(CLI::App* app, FlagSet& f) {
  app->add_option("--config", f.config, "JSON file with settings; flags override it");
  f.add(app, "out", "--out", "output root directory");
  f.add(app, "name", "--name", "experiment name (subdirectory of --out)");
}

void add_geometry(CLI::App* app, FlagSet& f) {
  f.add(app, "size", "--size", "grid size N or RxC");
}

void add_solver(CLI::App* app, FlagSet& f) {
  f.add(app, "norm", "--norm", "fro|spec|nuc");
  f.add(app, "alpha", "--alpha", "Jacobian regularization weight");
  f.add(app, "beta", "--beta", "assembly data weight");
  f.add(app, "tau", "--tau", "step size: auto or a positive number");
  f.add(app, "max_iters", "--max-iters", "iteration limit");
  f.add(app, "tol", "--tol", "relative-change stopping threshold");
  f.add(app, "weight_cap", "--weight-cap", "cap of the noise weights (er-weighted)");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Edge-based multi-contrast MRI reconstruction experiments", "edgerecon"};
  app.require_subcommand(1);

  FlagSet phantom_f, mask_f, sim_f, recon_f, eval_f, sweep_f;
  std::string report_arg;

  auto* phantom = app.add_subcommand("phantom", "generate a multi-contrast phantom");
  add_common(phantom, phantom_f);
  add_geometry(phantom, phantom_f);
  phantom_f.add(phantom, "phantom", "--type", "shepp-logan|brain-like");
  phantom_f.add(phantom, "contrasts", "--contrasts", "number of contrasts");

  auto* mask = app.add_subcommand("mask", "generate a sampling mask");
  add_common(mask, mask_f);
  add_geometry(mask, mask_f);
  mask_f.add(mask, "mask", "--type", "radial|poisson|full");
  mask_f.add(mask, "ratio", "--ratio", "target sampling ratio");
  mask_f.add(mask, "seed", "--seed", "random seed");

  auto* sim = app.add_subcommand("simulate", "simulate noisy undersampled k-space");
  add_common(sim, sim_f);
  sim_f.add(sim, "sigma", "--sigma", "noise standard deviation (unnormalized DFT units)");
  sim_f.add(sim, "seed", "--seed", "random seed");

  auto* recon = app.add_subcommand("recon", "reconstruct images from simulated data");
  add_common(recon, recon_f);
  recon_f.add(recon, "method", "--method", "er|er-weighted|zero-fill|independent");
  add_solver(recon, recon_f);

  auto* eval = app.add_subcommand("eval", "recompute metrics of a reconstruction");
  add_common(eval, eval_f);
  eval->add_option("--report", report_arg, "report to check (default <out>/<name>/report.json)");

  auto* sweep = app.add_subcommand("sweep", "run norms x methods x noise levels");
  add_common(sweep, sweep_f);
  add_geometry(sweep, sweep_f);
  sweep_f.add(sweep, "phantom", "--phantom", "shepp-logan|brain-like");
  sweep_f.add(sweep, "contrasts", "--contrasts", "number of contrasts");
  sweep_f.add(sweep, "mask", "--mask", "radial|poisson|full");
  sweep_f.add(sweep, "ratio", "--ratio", "target sampling ratio");
  sweep_f.add(sweep, "seed", "--seed", "random seed");
  sweep_f.add(sweep, "norms", "--norms", "comma-separated norms");
  sweep_f.add(sweep, "methods", "--methods", "comma-separated methods");
  sweep_f.add(sweep, "sigmas", "--sigmas", "comma-separated noise levels");
  add_solver(sweep, sweep_f);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (phantom->parsed()) return cmd_phantom(resolve(phantom_f));
    if (mask->parsed()) return cmd_mask(resolve(mask_f));
    if (sim->parsed()) return cmd_simulate(resolve(sim_f));
    if (recon->parsed()) return cmd_recon(resolve(recon_f));
    if (eval->parsed()) return cmd_eval(resolve(eval_f), report_arg);
    if (sweep->parsed()) return cmd_sweep(resolve(sweep_f));
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace edgerecon_cli
