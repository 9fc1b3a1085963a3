#pragma once

// Reader/writer for the SDPA sparse text format ("*.dat-s"):
//
//   mDIM
//   nBLOCK
//   bLOCKsTRUCT           (negative entries = diagonal blocks)
//   c_1 ... c_mDIM
//   matno blkno i j value (matno 0 is F_0; indices 1-based, upper triangle)
//
// encoding  min c.x  s.t.  sum_i x_i F_i - F_0 >= 0.
//
// Problems with equality rows are presolved before export; the header
// comments carry the origin label, the block layout, and any constant
// objective offset introduced by the elimination, so an external solver's
// optimal value can be compared directly.

#include <string>

#include "steerkit/sdp.hpp"

namespace steerkit {

// Deterministic, bit-exact text for a given problem (entries sorted, 17
// significant digits).
std::string export_sdpa(const SdpProblem& problem);

// Parses text in the format written by export_sdpa (and standard SDPA files).
// Throws ParseError on malformed input.
SdpProblem import_sdpa(const std::string& text);

void write_sdpa_file(const SdpProblem& problem, const std::string& path);
SdpProblem read_sdpa_file(const std::string& path);

}  // namespace steerkit
