#pragma once

#include <cstdint>
#include <fstream>
#include <string>

namespace sdeproj {

// Shortest text form of a double that round-trips exactly; used everywhere
// a floating-point value lands in a CSV, so that repeated runs are
// byte-identical.
std::string fmt_double(double v);

// Little-endian fixed-width binary helpers (the on-disk path format).
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f64(std::ostream& os, double v);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
double read_f64(std::istream& is);

std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace sdeproj
