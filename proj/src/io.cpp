#include "sdeproj/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "sdeproj/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary path files assume a little-endian host");

namespace sdeproj {

std::string fmt_double(double v) {
  char buf[40];
  // %.17g round-trips every double and is locale-independent for the
  // characters it can emit
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  require(bool(is), ErrorCode::config, "truncated binary file");
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  require(bool(is), ErrorCode::config, "truncated binary file");
  return v;
}

double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  require(bool(is), ErrorCode::config, "truncated binary file");
  return v;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), ErrorCode::config, "cannot open for writing: " + path);
  return os;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), ErrorCode::config, "cannot open for reading: " + path);
  return is;
}

}  // namespace sdeproj
