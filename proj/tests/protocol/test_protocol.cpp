// End-to-end experiment checks on the 256x256 protocol instance, driven
// through the command line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& root() {
  static const fs::path p = [] {
    const fs::path d = fs::temp_directory_path() / ("edgerecon_protocol_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return p;
}

int cli(std::vector<std::string> args, const std::string& name) {
  args.insert(args.end(), {"--out", root().string(), "--name", name});
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int code = edgerecon_cli::run(args);
  std::cout.rdbuf(old);
  return code;
}

// Shepp-Logan 256^2, 3 contrasts, radial 13.5%.
void prepare(const std::string& name, const std::string& sigma) {
  REQUIRE(cli({"phantom", "--size", "256", "--contrasts", "3"}, name) == 0);
  REQUIRE(cli({"mask", "--type", "radial", "--ratio", "0.135", "--seed", "1"}, name) == 0);
  REQUIRE(cli({"simulate", "--sigma", sigma, "--seed", "1"}, name) == 0);
}

std::vector<double> recon_errors(const std::string& name, std::vector<std::string> flags) {
  flags.insert(flags.begin(), "recon");
  REQUIRE(cli(flags, name) == 0);
  std::ifstream in(root() / name / "report.json");
  return nlohmann::json::parse(in)["relative_error"].get<std::vector<double>>();
}

std::string show(const std::vector<double>& v) {
  std::ostringstream s;
  for (double x : v) s << x << " ";
  return s.str();
}

}  // namespace

TEST_CASE("joint edges beat independent reconstruction at sigma 4") {
  prepare("joint", "4");
  const auto er = recon_errors("joint", {"--method", "er"});
  const auto ind = recon_errors("joint", {"--method", "independent"});
  INFO("er " << show(er) << "independent " << show(ind));
  for (std::size_t j = 0; j < 3; ++j) CHECK(er[j] < ind[j]);
}

TEST_CASE("norm sweep on the noiseless phantom") {
  REQUIRE(cli({"sweep", "--size", "256", "--contrasts", "3", "--mask", "radial", "--ratio", "0.135",
               "--seed", "1", "--sigmas", "0", "--methods", "er", "--norms", "fro,spec,nuc"},
              "sweep") == 0);
  std::ifstream in(root() / "sweep" / "sweep.csv");
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> errors;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() >= 6);
    errors.push_back({std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5])});
  }
  REQUIRE(errors.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double lo = 1e300, hi = 0;
    for (const auto& e : errors) {
      lo = std::min(lo, e[j]);
      hi = std::max(hi, e[j]);
    }
    INFO("contrast " << j + 1 << ": fro " << errors[0][j] << " spec " << errors[1][j] << " nuc " << errors[2][j]);
    CHECK(hi <= 1.1 * lo);
  }
}

TEST_CASE("assembly weight barely matters") {
  prepare("beta", "0");
  std::map<std::string, std::vector<double>> e;
  for (const char* beta : {"1e-4", "1e-3", "1e-2"}) e[beta] = recon_errors("beta", {"--method", "er", "--beta", beta});
  for (std::size_t j = 0; j < 3; ++j) {
    double lo = 1e300, hi = 0;
    for (const auto& [beta, v] : e) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
    }
    INFO("contrast " << j + 1 << " spread " << hi - lo);
    // relative errors agree to within two percentage points
    CHECK(hi - lo <= 0.02);
  }
}
