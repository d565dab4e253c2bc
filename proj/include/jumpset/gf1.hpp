#pragma once

#include <filesystem>

#include "jumpset/grid.hpp"

namespace jumpset {

// GF1 on-disk format: a JSON header
//   {"gf1": 1, "dim": n, "shape": [...], "spacing": h, "origin": [...], "payload": "<relative path>"}
// next to a raw little-endian float64 payload in row-major order.
// NaN marks undefined samples; +-inf are preserved.

/// Reads a GF1 header and its payload. Throws FormatError (with byte offset)
/// or Error(DimensionUnsupported) for n > 3.
GridFunction read_grid(const std::filesystem::path& header_path);

/// Writes `header_path` and the payload file named `payload_name`, placed in
/// the header's directory. The default payload name swaps the header's
/// ".gf1.json"/".json" suffix for ".bin".
void write_grid(const GridFunction& u, const std::filesystem::path& header_path,
                const std::string& payload_name = {});

}  // namespace jumpset
