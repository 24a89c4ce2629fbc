#include "doctest.h"

#include <png.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "edgerecon/cgrid_io.hpp"
#include "edgerecon/error.hpp"
#include "edgerecon/metrics.hpp"
#include "edgerecon/scene.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace edgerecon;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("edgerecon_unit_" + std::to_string(::getpid())) / name;
  fs::create_directories(p);
  return p;
}

std::vector<std::uint8_t> read_png_gray(const fs::path& path, std::size_t& rows, std::size_t& cols) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  REQUIRE(png_image_begin_read_from_file(&image, path.c_str()));
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(image));
  REQUIRE(png_image_finish_read(&image, nullptr, px.data(), 0, nullptr));
  rows = image.height;
  cols = image.width;
  return px;
}

}  // namespace

TEST_CASE("relative error") {
  std::mt19937_64 rng(1);
  const ComplexGrid u = oracle::random_grid(16, 16, rng);
  CHECK(relative_error(u, u) == 0.0);
  CHECK(relative_error(ComplexGrid(16, 16), u) == doctest::Approx(1.0).epsilon(1e-15));
  // p = +-0.1 u* keeps every sample's phase, so ||p|| = 0.1 ||u*|| on magnitudes too
  const auto ref = shepp_logan_multicontrast(32, 32, 1)[0];
  std::bernoulli_distribution coin(0.5);
  ComplexGrid v = ref;
  for (cplx& z : v.values()) z *= coin(rng) ? 1.1 : 0.9;
  CHECK(std::abs(relative_error(v, ref) - 0.1) < 1e-12);
  for (double c : {0.0, 0.5, 1.0, 2.5}) {
    ComplexGrid cu = u;
    for (cplx& z : cu.values()) z *= c;
    CHECK(std::abs(relative_error(cu, u) - std::abs(c - 1)) < 1e-12);
  }
  // only magnitudes count
  ComplexGrid rotated = u;
  for (cplx& z : rotated.values()) z *= std::polar(1.0, 0.7);
  CHECK(relative_error(rotated, u) < 1e-15);
  CHECK_THROWS_AS(relative_error(u, ComplexGrid(16, 16)), Error);
  CHECK_THROWS_AS(relative_error(u, ComplexGrid(16, 8)), Error);
}

TEST_CASE("psnr") {
  std::mt19937_64 rng(2);
  const ComplexGrid u = oracle::random_grid(16, 16, rng, false);
  CHECK(std::isinf(psnr(u, u)));
  // a constant reference perturbed by +-e stays nonnegative, so RMSE = e exactly
  ComplexGrid flat(16, 16), at_peak(16, 16), half(16, 16);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double s = (i % 2 == 0) ? 1.0 : -1.0;
    flat[i] = 1.0;
    at_peak[i] = 1.0 + s;
    half[i] = 1.0 + 0.5 * s;
  }
  CHECK(std::abs(psnr(at_peak, flat)) < 1e-12);
  CHECK(std::abs(psnr(half, flat) - psnr(at_peak, flat) - 6.0206) < 1e-4);
}

TEST_CASE("trace CSV round trip is exact") {
  SolverTrace t;
  t.error_columns = 2;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    t.records.push_back({k, 0.001 * k + u(rng) * 1e-9, 1.0 / (k + 3.0), {u(rng), u(rng) * 1e-17}});
  }
  t.records[7].objective = std::numeric_limits<double>::quiet_NaN();
  const std::string text = format_trace_csv(t);
  CHECK(text.rfind("iter,seconds,objective,relerr_1,relerr_2\n", 0) == 0);
  const SolverTrace back = parse_trace_csv(text);
  REQUIRE(back.records.size() == t.records.size());
  CHECK(back.error_columns == 2);
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    if (k == 7) {
      CHECK(std::isnan(back.records[k].objective));
      continue;
    }
    CHECK(back.records[k] == t.records[k]);
  }
  CHECK(format_trace_csv(back) == text);

  const fs::path dir = scratch_dir("csv");
  write_trace_csv(t, dir / "t.csv");
  CHECK(format_trace_csv(read_trace_csv(dir / "t.csv")) == text);
  CHECK_THROWS_AS(parse_trace_csv("it,seconds\n"), Error);
  CHECK_THROWS_AS(parse_trace_csv("iter,seconds,objective\n1,x,2\n"), Error);
  CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), Error);
}

TEST_CASE("report JSON schema and round trip") {
  EvalReport r;
  r.method = "er";
  r.norm = "fro";
  r.mask = "radial";
  r.mask_ratio = 0.1427;
  r.sigma = 4;
  r.seed = 18446744073709551615ull;
  r.relative_error = {0.1, 0.02, 1.0 / 3.0};
  r.psnr_db = {30.5, std::numeric_limits<double>::infinity(), 12.25};
  r.seconds = 3.5;
  r.iterations = 300;
  const std::string text = format_report_json(r);
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"method", "norm", "mask", "mask_ratio", "sigma", "seed",
                                         "contrasts", "relative_error", "psnr_db", "seconds",
                                         "iterations"});
  CHECK(j["contrasts"] == 3);
  CHECK(j["psnr_db"][1].is_null());
  CHECK(parse_report_json(text) == r);

  const fs::path dir = scratch_dir("json");
  write_report_json(r, dir / "report.json");
  CHECK(read_report_json(dir / "report.json") == r);
  CHECK_THROWS_AS(parse_report_json("{\"method\": 1}"), Error);
  CHECK_THROWS_AS(parse_report_json("not json"), Error);
}

TEST_CASE("cgrid round trip") {
  std::mt19937_64 rng(4);
  std::vector<ComplexGrid> g{oracle::random_grid(6, 5, rng), oracle::random_grid(6, 5, rng)};
  const fs::path dir = scratch_dir("cgrid");
  write_cgrid(dir / "x.cgrid", g);
  CHECK(fs::exists(dir / "x.cgrid.json"));
  CHECK(fs::file_size(dir / "x.cgrid") == 2 * 30 * 16);
  CHECK(read_cgrid(dir / "x.cgrid") == g);
  CHECK(read_cgrid(dir / "x.cgrid.json") == g);

  const SamplingMask m = radial_mask(12, 10, 0.3, 1);
  write_mask_cgrid(dir / "m.cgrid", m);
  CHECK(read_mask_cgrid(dir / "m.cgrid") == m);
  CHECK_THROWS_AS(read_cgrid(dir / "m.cgrid"), Error);
  CHECK_THROWS_AS(read_mask_cgrid(dir / "x.cgrid"), Error);

  std::ofstream(dir / "x.cgrid", std::ios::binary | std::ios::trunc) << "short";
  CHECK_THROWS_AS(read_cgrid(dir / "x.cgrid"), Error);
  try {
    read_cgrid(dir / "nothing.cgrid");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("PNG export") {
  const fs::path dir = scratch_dir("png");
  const auto u = shepp_logan_multicontrast(40, 30, 1);
  write_magnitude_png(u[0], dir / "u.png");
  std::size_t rows = 0, cols = 0;
  const auto px = read_png_gray(dir / "u.png", rows, cols);
  CHECK(rows == 40);
  CHECK(cols == 30);
  CHECK(*std::max_element(px.begin(), px.end()) == 255);
  CHECK(*std::min_element(px.begin(), px.end()) == 0);

  write_error_png(u[0], u[0], dir / "e.png");
  for (std::uint8_t p : read_png_gray(dir / "e.png", rows, cols)) CHECK((p == 127 || p == 128));

  // a lone DC sample lands at the display center
  std::vector<std::uint8_t> s(16 * 16, 0);
  s[0] = 1;
  write_mask_png(SamplingMask(16, 16, s), dir / "m.png");
  const auto mp = read_png_gray(dir / "m.png", rows, cols);
  for (std::size_t i = 0; i < mp.size(); ++i) CHECK(mp[i] == (i == 8 * 16 + 8 ? 255 : 0));

  CHECK_THROWS_AS(write_magnitude_png(u[0], dir / "no_such_dir" / "u.png"), Error);
}
