#include "steklov/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "steklov/error.hpp"

namespace steklov {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

CsvWriter::CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
}

CsvWriter& CsvWriter::row() {
    buf_ += '\n';
    fresh_ = true;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
    if (!fresh_) buf_ += ',';
    buf_ += v;
    fresh_ = false;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::string_view(std::to_string(v))); }
CsvWriter& CsvWriter::cell(bool v) { return cell(std::string_view(v ? "true" : "false")); }

std::string CsvWriter::str() const { return buf_ + '\n'; }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::ConfigError, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::ConfigError, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string pgm_sign_map(const FieldGrid& grid) {
    std::string out = "P5\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny));
    for (int j = grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int s = grid.sign[grid.index(i, j)];
            out += static_cast<char>(s > 0 ? 255 : (s < 0 ? 0 : 128));
        }
    }
    return out;
}

std::string svg_polylines(const std::vector<Polyline>& lines, const Box& box) {
    std::ostringstream os;
    const double w = box.x_max - box.x_min, h = box.y_max - box.y_min;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(box.x_min) << ' '
       << format_double(-box.y_max) << ' ' << format_double(w) << ' ' << format_double(h) << "\">\n";
    os << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\""
       << format_double(std::max(w, h) / 500.0) << "\">\n";
    for (const auto& line : lines) {
        os << "<polyline points=\"";
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (k) os << ' ';
            os << format_double(line[k].x1) << ',' << format_double(line[k].x2);
        }
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string field_csv(const FieldGrid& grid) {
    CsvWriter csv({"x1", "x2", "inside", "lambda", "u", "sign"});
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t c = grid.index(i, j);
            const Point2 p = grid.center(i, j);
            csv.row().cell(p.x1).cell(p.x2).cell(static_cast<int>(grid.inside[c])).cell(grid.lambda[c]).cell(grid.u[c]).cell(
                static_cast<int>(grid.sign[c]));
        }
    }
    return csv.str();
}

}  // namespace steklov
