#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/analysis.hpp"
#include "steklov/reconstruction.hpp"

namespace steklov {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Minimal CSV builder; cells are joined with ',' and rows end with '\n'.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& row();
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(bool v);
    CsvWriter& cell(std::string_view v);
    std::string str() const;

private:
    std::string buf_;
    bool fresh_ = true;
};

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// P5 sign map (0 / 128 / 255 for -1 / 0 / +1), rows top to bottom.
std::string pgm_sign_map(const FieldGrid& grid);
std::string svg_polylines(const std::vector<Polyline>& lines, const Box& box);
std::string field_csv(const FieldGrid& grid);

}  // namespace steklov
