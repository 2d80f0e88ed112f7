// Bit-exact writers for CSV and binary PPM, plus a PPM reader for
// round-trip tests.  All numeric formatting is locale-free.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rtm::io {

/// Shortest-exact or 17-significant-digit decimal text for a double,
/// locale-independent ('.' decimal, no grouping).
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Writes header + rows, comma separated, LF line endings.
void write_csv(const CsvTable& table, const std::string& path);

struct PpmImage {
    int width = 0, height = 0;
    std::vector<std::array<std::uint8_t, 3>> pixels;  // row-major, top row first
};

/// Binary P6, maxval 255.
void write_ppm(const PpmImage& img, const std::string& path);
PpmImage read_ppm(const std::string& path);

}  // namespace rtm::io
