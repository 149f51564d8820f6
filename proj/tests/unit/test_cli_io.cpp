#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "steklov/commands.hpp"
#include "steklov/error.hpp"
#include "steklov/io.hpp"

using namespace steklov;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double num(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("doubles round-trip through the CSV formatter") {
    for (double v : {0.1, 1.0 / 3.0, 9.9501871847e-7, 1e-300, -2.5, 123456789.123456789}) {
        const std::string s = format_double(v);
        CHECK(num(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("config parsing and validation") {
    auto cfg = parse_config(R"j({"domain": {"preset": "ellipse(1,1.01)"}, "n_keep": 12, "alpha": 0.5})j");
    CHECK(cfg.domain.preset == "ellipse(1,1.01)");
    CHECK(cfg.n_keep == 12);
    CHECK(cfg.alpha == 0.5);

    cfg = parse_config(R"j({"domain": {"map": {"p_coeffs": [[0, 0.6], [0, 0.48]], "f0": [0.8, 0]}}, "solver": "both"})j");
    REQUIRE(cfg.domain.map.has_value());
    CHECK(cfg.domain.map->p_coeffs.size() == 2);
    CHECK(cfg.solver == SolverChoice::Both);

    CHECK(kind_of([] { parse_config(R"j({"domain": {"preset": "kite"}, "bogus": 1})j"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config(R"j({"domain": {"preset": "kite"}, "solver": "disk"})j"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config(R"j({"domain": {"preset": "kite", "map": {"p_coeffs": [1]}}})j"); }) ==
          ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config(R"j({"domain": {"preset": "kite"}, "grid": {"box": [0, 1]}})j"); }) ==
          ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_config("{not json"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { resolve_domain(DomainSpec{"square", {}, {}, std::nullopt}); }) == ErrorKind::ConfigError);
}

TEST_CASE("custom Fourier curves load from config") {
    // Unit circle: x = (e^{it} + e^{-it})/2, y = (e^{it} - e^{-it})/(2i).
    const auto cfg = parse_config(
        R"j({"domain": {"curve": {"coeffs_x": [0.5, 0, 0.5], "coeffs_y": [[0, 0.5], 0, [0, -0.5]]}}, "n_nodes": 64, "n_keep": 5, "verify": false})j");
    const auto out = run_spectrum(cfg);
    const auto rows = parse_csv(out.find("spectrum.csv")->content);
    REQUIRE(rows.size() == 6);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(num(rows[static_cast<std::size_t>(j + 1)][1]) - std::ceil(j / 2.0)) < 1e-10);
}

TEST_CASE("spectrum command on the circle preset") {
    auto cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "n_keep": 9})j");
    const auto out = run_spectrum(cfg);
    const auto* csv = out.find("spectrum.csv");
    REQUIRE(csv != nullptr);
    const auto rows = parse_csv(csv->content);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"j", "sigma", "residual", "trusted"});
    for (int j = 0; j < 9; ++j) {
        CHECK(std::abs(num(rows[static_cast<std::size_t>(j + 1)][1]) - std::ceil(j / 2.0)) < 1e-10);
        CHECK(rows[static_cast<std::size_t>(j + 1)][3] == "true");
    }
    REQUIRE(out.find("densities.csv") != nullptr);
    // Deterministic output.
    CHECK(run_spectrum(cfg).find("spectrum.csv")->content == csv->content);
}

TEST_CASE("spectrum command on the nearly circular ellipse") {
    auto cfg = parse_config(R"j({"domain": {"preset": "ellipse(1,1.01)"}, "n_keep": 31})j");
    const auto rows = parse_csv(run_spectrum(cfg).find("spectrum.csv")->content);
    CHECK(num(rows[21][1]) == doctest::Approx(9.9502).epsilon(5e-4 / 9.9502));
    CHECK(num(rows[31][1]) == doctest::Approx(14.9253).epsilon(5e-4 / 14.9253));
}

TEST_CASE("spectrum command with both solvers on a small Mobius map") {
    auto cfg = parse_config(
        R"j({"domain": {"preset": "mobius(0.5,8)"}, "solver": "both", "n_keep": 15, "expect": [{"j": 4, "sigma": 2.0}]})j");
    const auto out = run_spectrum(cfg);
    const auto rows = parse_csv(out.find("spectrum.csv")->content);
    CHECK(rows[0] == std::vector<std::string>{"j", "sigma", "residual", "trusted", "sigma_disk", "abs_diff"});
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r][3] == "true") CHECK(num(rows[r][5]) < 1e-8);
    REQUIRE(out.find("disk_vectors.csv") != nullptr);
    bool noted = false;
    for (const auto& n : out.notes) noted = noted || n.find("expected sigma_4") != std::string::npos;
    CHECK(noted);
}

TEST_CASE("cauchy table on the circle") {
    auto cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "cauchy": {"point": [0.5, 0], "n": [1, 2, 5, 10]}})j");
    const auto rows = parse_csv(run_cauchy_table(cfg).find("cauchy.csv")->content);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"n", "plain", "shifted", "abs_error", "rel_error"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const int n = static_cast<int>(num(rows[r][0]));
        CHECK(num(rows[r][1]) == doctest::Approx(std::pow(0.5, n) / (2.0 * n)).epsilon(1e-13));
        CHECK(num(rows[r][4]) < 1e-10);
    }
}

TEST_CASE("render writes PGM, SVG and CSV with the specified layout") {
    auto cfg = parse_config(
        R"j({"domain": {"preset": "disk"}, "solver": "disk", "N_tr": 32, "n_keep": 6, "grid": {"box": [-1, 1, -1, 1], "resolution": 32}, "render": {"index": 3, "ball_center": [0, 0], "ball_r0": 0.5}})j");
    const auto out = run_render(cfg);
    const auto* pgm = out.find("sign.pgm");
    REQUIRE(pgm != nullptr);
    const std::string head = "P5\n32 32\n255\n";
    REQUIRE(pgm->content.size() == head.size() + 32 * 32);
    CHECK(pgm->content.substr(0, head.size()) == head);
    // sigma_3 = 2: a cos/sin(2 theta) mode, four alternating sectors.
    const auto px = [&](int i, int row) { return static_cast<unsigned char>(pgm->content[head.size() + static_cast<std::size_t>(row * 32 + i)]); };
    CHECK(px(0, 0) == 128);  // corner outside the disk
    // The mode is some combination of cos/sin(2 theta): even under the
    // antipodal map, odd under a quarter turn. Cell (i, row) goes to
    // (31 - i, 31 - row) and (row, 31 - i) respectively.
    int decided = 0;
    for (auto [i, row] : {std::pair{24, 8}, std::pair{26, 11}, std::pair{28, 15}, std::pair{20, 4}}) {
        const unsigned char a = px(i, row);
        if (a == 128) continue;
        ++decided;
        CHECK(px(31 - i, 31 - row) == a);
        CHECK(px(row, 31 - i) == 255 - a);
    }
    CHECK(decided >= 3);
    const auto* svg = out.find("nodal.svg");
    REQUIRE(svg != nullptr);
    CHECK(svg->content.find("<polyline") != std::string::npos);
    const auto field = parse_csv(out.find("field.csv")->content);
    CHECK(field.size() == 32 * 32 + 1);
    CHECK(field[0] == std::vector<std::string>{"x1", "x2", "inside", "lambda", "u", "sign"});
    REQUIRE(out.find("balls.csv") != nullptr);
}

TEST_CASE("approximate command") {
    auto cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "approximate": {"series": [0, 1], "N": [0, 1]}})j");
    auto rows = parse_csv(run_approximate(cfg).find("approximate.csv")->content);
    CHECK(rows[0] == std::vector<std::string>{"N", "sup_s", "max_ds", "certified"});
    CHECK(num(rows[1][1]) < 1e-13);
    CHECK(rows[1][3] == "true");

    cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "approximate": {"mobius": 0.8, "N": [5, 10, 20]}})j");
    rows = parse_csv(run_approximate(cfg).find("approximate.csv")->content);
    REQUIRE(rows.size() == 4);
    const double r1 = std::pow(num(rows[2][1]) / num(rows[1][1]), 1.0 / 5.0);
    const double r2 = std::pow(num(rows[3][1]) / num(rows[2][1]), 1.0 / 10.0);
    CHECK(r1 == doctest::Approx(0.8).epsilon(0.1));
    CHECK(r2 == doctest::Approx(0.8).epsilon(0.1));

    // f(z) = z^2 has g(0) = 0.
    cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "approximate": {"series": [0, 0, 1], "N": [2]}})j");
    CHECK(kind_of([&] { run_approximate(cfg); }) == ErrorKind::ZeroAtOrigin);

    // f(z) = z - z^2: g = 1 - 2z vanishes at z = 1/2, inside the disk.
    cfg = parse_config(R"j({"domain": {"preset": "circle(1)"}, "approximate": {"series": [0, 1, -1], "N": [1]}})j");
    const auto out = run_approximate(cfg);
    rows = parse_csv(out.find("approximate.csv")->content);
    CHECK(rows[1][3] == "false");
    CHECK(rows[1][1] == "nan");
}

TEST_CASE("tunneling and remainder reports") {
    auto cfg = parse_config(R"j({"domain": {"preset": "disk"}, "N_tr": 40, "n_keep": 9})j");
    auto rows = parse_csv(run_tunneling(cfg).find("tunneling.csv")->content);
    CHECK(rows[0] == std::vector<std::string>{"j", "sigma", "A_0", "C0", "C_low"});
    for (std::size_t r = 2; r < rows.size(); ++r) CHECK(rows[r][3] == "inf");

    cfg = parse_config(R"j({"domain": {"preset": "mobius(0.5,6)"}, "n_keep": 12, "analysis": {"delta": [0.1, 0.2]}})j");
    const auto out = run_remainder(cfg);
    rows = parse_csv(out.find("remainder.csv")->content);
    CHECK(rows[0] == std::vector<std::string>{"sigma", "delta", "m", "N", "ratio", "bound"});
    for (std::size_t r = 1; r < rows.size(); ++r) CHECK(num(rows[r][4]) <= num(rows[r][5]) * (1 + 1e-12));
}

TEST_CASE("artifacts are written atomically into the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "steklov_io_test";
    std::filesystem::remove_all(dir);
    CommandOutput out;
    out.files.push_back({"a.csv", "x\n1\n"});
    write_artifacts(dir.string(), out);
    std::ifstream in(dir / "a.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n1\n");
    CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));
    std::filesystem::remove_all(dir);
}
