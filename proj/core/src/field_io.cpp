#include "wavelab/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "wavelab/errors.hpp"

namespace wavelab {

namespace {
constexpr char kMagic[4] = {'Z', 'F', 'L', 'D'};
constexpr uint8_t kVersion = 1;
}  // namespace

void write_field(const GridField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("write_field: cannot open " + path);
  const int n = field.grid.n;
  uint8_t header[8] = {};
  std::memcpy(header, kMagic, 4);
  header[4] = kVersion;
  out.write(reinterpret_cast<const char*>(header), 8);
  const uint32_t un = uint32_t(n);
  out.write(reinterpret_cast<const char*>(&un), 4);
  // Lattice order: k1 outer from -n/2, k2 inner.
  std::vector<double> row(size_t(n) * 2);
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      const cplx c = field.coeff(k1, k2);
      row[size_t(k2 + n / 2) * 2] = c.real();
      row[size_t(k2 + n / 2) * 2 + 1] = c.imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              std::streamsize(row.size() * sizeof(double)));
  }
  if (!out) throw format_error("write_field: write failed for " + path);
}

GridField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("read_field: cannot open " + path);
  uint8_t header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in || std::memcmp(header, kMagic, 4) != 0)
    throw format_error("read_field: bad magic in " + path);
  if (header[4] != kVersion)
    throw format_error("read_field: unsupported version in " + path);
  uint32_t un = 0;
  in.read(reinterpret_cast<char*>(&un), 4);
  if (!in || un < 8 || un % 2 != 0 || un > (1u << 16))
    throw format_error("read_field: bad grid size in header of " + path);
  const int n = int(un);

  // Reject truncated or oversized payloads before constructing the field.
  const auto data_begin = in.tellg();
  in.seekg(0, std::ios::end);
  const auto data_bytes = in.tellg() - data_begin;
  const auto expected = std::streamoff(size_t(n) * n * 2 * sizeof(double));
  if (data_bytes != expected)
    throw format_error("read_field: " + path + ": expected n=" +
                       std::to_string(n) + " (" + std::to_string(expected) +
                       " payload bytes), found " + std::to_string(data_bytes));
  in.seekg(data_begin);

  GridField field{TorusGrid(n)};
  std::vector<double> row(size_t(n) * 2);
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    in.read(reinterpret_cast<char*>(row.data()),
            std::streamsize(row.size() * sizeof(double)));
    if (!in) throw format_error("read_field: truncated payload in " + path);
    for (int k2 = -n / 2; k2 < n / 2; ++k2)
      field.coeff(k1, k2) = {row[size_t(k2 + n / 2) * 2],
                             row[size_t(k2 + n / 2) * 2 + 1]};
  }
  to_physical(field);
  return field;
}

}  // namespace wavelab
