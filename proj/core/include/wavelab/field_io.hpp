#pragma once

#include <string>

#include "wavelab/field.hpp"

namespace wavelab {

// ZFLD binary field format, bit-exact round trip:
//   bytes 0-3  magic "ZFLD"
//   byte  4    version = 1
//   bytes 5-7  zero padding
//   u32 LE     n
//   n^2 complex spectral coefficients, interleaved f64 LE (re, im),
//   row-major over k1 then k2 in lattice order -n/2 ... n/2-1.
void write_field(const GridField& field, const std::string& path);
GridField read_field(const std::string& path);

}  // namespace wavelab
