#pragma once

#include <filesystem>
#include <vector>

#include "edgerecon/grid.hpp"

namespace edgerecon {

// cgrid files: raw little-endian payload at `path` and a JSON sidecar at
// `path` + ".json" holding {"rows", "cols", "dtype", "contrasts"}.
//   dtype "c64": interleaved (real, imag) float64, contrast-major, row-major.
//   dtype "u8":  one byte per sample (sampling masks, contrasts == 1).
// Readers accept either the payload path or the sidecar path.

void write_cgrid(const std::filesystem::path& path, const std::vector<ComplexGrid>& grids);
std::vector<ComplexGrid> read_cgrid(const std::filesystem::path& path);

void write_mask_cgrid(const std::filesystem::path& path, const SamplingMask& mask);
SamplingMask read_mask_cgrid(const std::filesystem::path& path);

std::filesystem::path cgrid_sidecar_path(const std::filesystem::path& path);

}  // namespace edgerecon
