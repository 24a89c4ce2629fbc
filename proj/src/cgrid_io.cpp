#include "edgerecon/cgrid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "edgerecon/error.hpp"
#include "json.hpp"

namespace edgerecon {

static_assert(std::endian::native == std::endian::little,
              "cgrid I/O assumes a little-endian host");

namespace {

struct Header {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t contrasts = 0;
  std::string dtype;
};

std::filesystem::path payload_path(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    std::filesystem::path p = path;
    return p.replace_extension();
  }
  return path;
}

void write_header(const std::filesystem::path& path, const Header& h) {
  nlohmann::ordered_json j;
  j["rows"] = h.rows;
  j["cols"] = h.cols;
  j["dtype"] = h.dtype;
  j["contrasts"] = h.contrasts;
  const auto sidecar = cgrid_sidecar_path(path);
  std::ofstream out(sidecar, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open " + sidecar.string() + " for writing");
  out << j.dump() << '\n';
  if (!out) fail_io("failed writing " + sidecar.string());
}

Header read_header(const std::filesystem::path& path) {
  const auto sidecar = cgrid_sidecar_path(path);
  std::ifstream in(sidecar, std::ios::binary);
  if (!in) fail_io("cannot open " + sidecar.string());
  Header h;
  try {
    const auto j = nlohmann::json::parse(in);
    h.rows = j.at("rows").get<std::size_t>();
    h.cols = j.at("cols").get<std::size_t>();
    h.dtype = j.at("dtype").get<std::string>();
    h.contrasts = j.at("contrasts").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail_invalid(sidecar.string() + ": malformed cgrid sidecar (" + e.what() + ")");
  }
  if (h.rows < 2 || h.cols < 2 || h.contrasts < 1) {
    fail_invalid(sidecar.string() + ": invalid shape in cgrid sidecar");
  }
  return h;
}

std::string read_payload(const std::filesystem::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = ss.str();
  if (bytes.size() != expected) {
    fail_invalid(path.string() + ": payload has " + std::to_string(bytes.size()) +
                 " bytes, sidecar implies " + std::to_string(expected));
  }
  return bytes;
}

void write_payload(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open " + path.string() + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) fail_io("failed writing " + path.string());
}

}  // namespace

std::filesystem::path cgrid_sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = payload_path(path);
  p += ".json";
  return p;
}

void write_cgrid(const std::filesystem::path& path, const std::vector<ComplexGrid>& grids) {
  if (grids.empty()) fail_invalid("write_cgrid: no grids");
  for (const ComplexGrid& g : grids) {
    if (!g.same_shape(grids[0])) fail_invalid("write_cgrid: contrasts differ in shape");
  }
  const auto payload = payload_path(path);
  std::vector<double> flat;
  flat.reserve(2 * grids.size() * grids[0].size());
  for (const ComplexGrid& g : grids) {
    for (const cplx& z : g.values()) {
      flat.push_back(z.real());
      flat.push_back(z.imag());
    }
  }
  write_payload(payload, flat.data(), flat.size() * sizeof(double));
  write_header(payload, {grids[0].rows(), grids[0].cols(), grids.size(), "c64"});
}

std::vector<ComplexGrid> read_cgrid(const std::filesystem::path& path) {
  const auto payload = payload_path(path);
  const Header h = read_header(payload);
  if (h.dtype != "c64") fail_invalid(payload.string() + ": expected dtype c64, found " + h.dtype);
  const std::size_t n = h.rows * h.cols;
  const std::string bytes = read_payload(payload, h.contrasts * n * 2 * sizeof(double));
  std::vector<ComplexGrid> out;
  for (std::size_t j = 0; j < h.contrasts; ++j) {
    std::vector<cplx> data(n);
    for (std::size_t i = 0; i < n; ++i) {
      double re = 0.0, im = 0.0;
      const std::size_t offset = ((j * n + i) * 2) * sizeof(double);
      std::memcpy(&re, bytes.data() + offset, sizeof(double));
      std::memcpy(&im, bytes.data() + offset + sizeof(double), sizeof(double));
      data[i] = cplx(re, im);
    }
    out.emplace_back(h.rows, h.cols, std::move(data));
  }
  return out;
}

void write_mask_cgrid(const std::filesystem::path& path, const SamplingMask& mask) {
  const auto payload = payload_path(path);
  write_payload(payload, mask.samples().data(), mask.size());
  write_header(payload, {mask.rows(), mask.cols(), 1, "u8"});
}

SamplingMask read_mask_cgrid(const std::filesystem::path& path) {
  const auto payload = payload_path(path);
  const Header h = read_header(payload);
  if (h.dtype != "u8" || h.contrasts != 1) {
    fail_invalid(payload.string() + ": expected a single-contrast u8 mask");
  }
  const std::string bytes = read_payload(payload, h.rows * h.cols);
  std::vector<std::uint8_t> samples(bytes.begin(), bytes.end());
  return SamplingMask(h.rows, h.cols, std::move(samples));
}

}  // namespace edgerecon
