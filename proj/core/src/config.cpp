#include "steklov/config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "steklov/error.hpp"

namespace steklov {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) fail(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

double get_double(const json& j, std::string_view what) {
    if (!j.is_number()) fail(std::string(what) + ": expected a number");
    return j.get<double>();
}

int get_int(const json& j, std::string_view what) {
    if (!j.is_number_integer()) fail(std::string(what) + ": expected an integer");
    return j.get<int>();
}

// A complex number is a bare real or a [re, im] pair.
cplx get_complex(const json& j, std::string_view what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(std::string(what) + ": expected a number or [re, im]");
}

std::vector<cplx> get_complex_list(const json& j, std::string_view what) {
    if (!j.is_array() || j.empty()) fail(std::string(what) + ": expected a non-empty array");
    std::vector<cplx> out;
    for (const auto& e : j) out.push_back(get_complex(e, what));
    return out;
}

template <class T, class F>
std::vector<T> get_list(const json& j, std::string_view what, F conv) {
    if (!j.is_array()) fail(std::string(what) + ": expected an array");
    std::vector<T> out;
    for (const auto& e : j) out.push_back(conv(e, what));
    return out;
}

Point2 get_point(const json& j, std::string_view what) {
    if (!j.is_array() || j.size() != 2) fail(std::string(what) + ": expected [x1, x2]");
    return {get_double(j[0], what), get_double(j[1], what)};
}

DomainSpec parse_domain(const json& j) {
    check_keys(j, "domain", {"preset", "curve", "map"});
    DomainSpec d;
    int forms = 0;
    if (j.contains("preset")) {
        if (!j["preset"].is_string()) fail("domain.preset: expected a string");
        d.preset = j["preset"].get<std::string>();
        ++forms;
    }
    if (j.contains("curve")) {
        const json& c = j["curve"];
        check_keys(c, "domain.curve", {"coeffs_x", "coeffs_y"});
        if (!c.contains("coeffs_x") || !c.contains("coeffs_y")) fail("domain.curve: coeffs_x and coeffs_y required");
        d.coeffs_x = get_complex_list(c["coeffs_x"], "domain.curve.coeffs_x");
        d.coeffs_y = get_complex_list(c["coeffs_y"], "domain.curve.coeffs_y");
        ++forms;
    }
    if (j.contains("map")) {
        const json& m = j["map"];
        check_keys(m, "domain.map", {"p_coeffs", "f0"});
        if (!m.contains("p_coeffs")) fail("domain.map: p_coeffs required");
        PolynomialConformalMap map;
        map.p_coeffs = get_complex_list(m["p_coeffs"], "domain.map.p_coeffs");
        if (m.contains("f0")) map.f0 = get_complex(m["f0"], "domain.map.f0");
        d.map = std::move(map);
        ++forms;
    }
    if (forms != 1) fail("domain: exactly one of preset, curve, map is required");
    return d;
}

}  // namespace

SolverChoice parse_solver(std::string_view s) {
    if (s == "bie") return SolverChoice::Bie;
    if (s == "disk") return SolverChoice::Disk;
    if (s == "both") return SolverChoice::Both;
    fail("solver: expected bie, disk or both");
}

Formulation parse_formulation(std::string_view s) {
    if (s == "regularized") return Formulation::Regularized;
    if (s == "naive") return Formulation::Naive;
    fail("formulation: expected regularized or naive");
}

Domain resolve_domain(const DomainSpec& spec) {
    auto from_map = [](PolynomialConformalMap map, std::string label) {
        // Re-certify so user-supplied maps get their roots checked.
        map = truncate_and_certify(PowerSeries{map.p_coeffs}, static_cast<int>(map.p_coeffs.size()) - 1, map.f0);
        AnalyticCurve curve = boundary_curve(map);
        return Domain{std::move(label), std::move(curve), std::move(map)};
    };
    if (spec.map) return from_map(*spec.map, "map");
    if (!spec.coeffs_x.empty()) {
        return Domain{"curve", AnalyticCurve::from_coefficients(spec.coeffs_x, spec.coeffs_y), std::nullopt};
    }
    const std::string& p = spec.preset;
    if (p == "rfe") return from_map(mobius_approximant(0.8, 20), p);
    if (p == "disk") return from_map(PolynomialConformalMap{{1.0}, 0.0, false, {}}, p);
    static const std::regex mob(R"(\s*mobius\(\s*([-+0-9.eE]+)\s*,\s*([0-9]+)\s*\)\s*)");
    std::smatch m;
    if (std::regex_match(p, m, mob)) {
        double a = 0.0;
        try {
            a = std::stod(m[1].str());
        } catch (const std::exception&) {
            fail("domain.preset: bad mobius parameter");
        }
        if (!(std::abs(a) < 1.0)) fail("domain.preset: mobius parameter must satisfy |a| < 1");
        return from_map(mobius_approximant(a, std::stoi(m[2].str())), p);
    }
    auto curve = curve_from_preset(p);
    if (!curve) fail("domain.preset: unknown preset '" + p + "'");
    return Domain{p, std::move(*curve), std::nullopt};
}

RunConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    check_keys(root, "config",
               {"domain", "solver", "formulation", "n_nodes", "N_tr", "n_keep", "verify", "alpha", "grid", "render",
                "cauchy", "analysis", "approximate", "expect", "output_dir"});
    RunConfig cfg;
    if (!root.contains("domain")) fail("config: domain is required");
    cfg.domain = parse_domain(root["domain"]);
    if (root.contains("solver")) {
        if (!root["solver"].is_string()) fail("solver: expected a string");
        cfg.solver = parse_solver(root["solver"].get<std::string>());
    }
    if (root.contains("formulation")) {
        if (!root["formulation"].is_string()) fail("formulation: expected a string");
        cfg.formulation = parse_formulation(root["formulation"].get<std::string>());
    }
    if (root.contains("n_nodes")) cfg.n_nodes = get_int(root["n_nodes"], "n_nodes");
    if (root.contains("N_tr")) cfg.N_tr = get_int(root["N_tr"], "N_tr");
    if (root.contains("n_keep")) cfg.n_keep = get_int(root["n_keep"], "n_keep");
    if (root.contains("verify")) {
        if (!root["verify"].is_boolean()) fail("verify: expected a boolean");
        cfg.verify = root["verify"].get<bool>();
    }
    if (root.contains("alpha")) cfg.alpha = get_double(root["alpha"], "alpha");
    if (root.contains("grid")) {
        const json& g = root["grid"];
        check_keys(g, "grid", {"box", "resolution"});
        if (g.contains("box")) {
            const json& b = g["box"];
            if (!b.is_array() || b.size() != 4) fail("grid.box: expected [x_min, x_max, y_min, y_max]");
            cfg.box = Box{get_double(b[0], "grid.box"), get_double(b[1], "grid.box"), get_double(b[2], "grid.box"),
                          get_double(b[3], "grid.box")};
        }
        if (g.contains("resolution")) cfg.resolution = get_int(g["resolution"], "grid.resolution");
    }
    if (root.contains("render")) {
        const json& r = root["render"];
        check_keys(r, "render", {"index", "ball_center", "ball_r0"});
        if (r.contains("index")) cfg.render_index = get_int(r["index"], "render.index");
        if (r.contains("ball_center")) cfg.ball_center = get_point(r["ball_center"], "render.ball_center");
        if (r.contains("ball_r0")) cfg.ball_r0 = get_double(r["ball_r0"], "render.ball_r0");
    }
    if (root.contains("cauchy")) {
        const json& c = root["cauchy"];
        check_keys(c, "cauchy", {"point", "n"});
        if (c.contains("point")) cfg.point = get_point(c["point"], "cauchy.point");
        if (c.contains("n")) cfg.n_list = get_list<int>(c["n"], "cauchy.n", get_int);
    }
    if (root.contains("analysis")) {
        const json& a = root["analysis"];
        check_keys(a, "analysis", {"delta", "m", "N", "K", "m_tunnel"});
        if (a.contains("delta")) cfg.delta = get_list<double>(a["delta"], "analysis.delta", get_double);
        if (a.contains("m")) cfg.m_list = get_list<int>(a["m"], "analysis.m", get_int);
        if (a.contains("N")) cfg.N = get_int(a["N"], "analysis.N");
        if (a.contains("K")) cfg.K = get_double(a["K"], "analysis.K");
        if (a.contains("m_tunnel")) cfg.m_tunnel = get_int(a["m_tunnel"], "analysis.m_tunnel");
    }
    if (root.contains("approximate")) {
        const json& a = root["approximate"];
        check_keys(a, "approximate", {"mobius", "series", "N", "samples"});
        if (a.contains("mobius") == a.contains("series")) fail("approximate: exactly one of mobius, series");
        if (a.contains("mobius")) cfg.target.mobius = get_complex(a["mobius"], "approximate.mobius");
        if (a.contains("series")) cfg.target.series = get_complex_list(a["series"], "approximate.series");
        if (a.contains("N")) cfg.N_list = get_list<int>(a["N"], "approximate.N", get_int);
        if (a.contains("samples")) cfg.offset_samples = get_int(a["samples"], "approximate.samples");
    }
    if (root.contains("expect")) {
        const json& e = root["expect"];
        if (!e.is_array()) fail("expect: expected an array");
        for (const auto& item : e) {
            check_keys(item, "expect[]", {"j", "sigma"});
            if (!item.contains("j") || !item.contains("sigma")) fail("expect[]: j and sigma required");
            cfg.expect.push_back({get_int(item["j"], "expect.j"), get_double(item["sigma"], "expect.sigma")});
        }
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) fail("output_dir: expected a string");
        cfg.output_dir = root["output_dir"].get<std::string>();
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const RunConfig& cfg) {
    const DomainSpec& d = cfg.domain;
    const int forms = (!d.preset.empty()) + (!d.coeffs_x.empty()) + (d.map.has_value());
    if (forms != 1) fail("domain: exactly one of preset, curve, map is required");
    const bool map_like = d.map || d.preset == "rfe" || d.preset == "disk" || d.preset.find("mobius") != std::string::npos;
    if (cfg.solver != SolverChoice::Bie && !map_like) fail("solver disk/both requires a conformal map domain");
    if (cfg.n_nodes < 0 || cfg.n_nodes % 2 != 0) fail("n_nodes: expected an even non-negative integer");
    if (cfg.N_tr < 0) fail("N_tr: expected a non-negative integer");
    if (cfg.n_keep < 1) fail("n_keep: expected a positive integer");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail("alpha: expected 0 < alpha <= 1");
    if (cfg.resolution < 2) fail("grid.resolution: expected >= 2");
    if (cfg.box && !(cfg.box->x_max > cfg.box->x_min && cfg.box->y_max > cfg.box->y_min)) fail("grid.box: empty box");
    if (cfg.render_index < 0) fail("render.index: expected >= 0");
    if (!(cfg.ball_r0 > 0.0)) fail("render.ball_r0: expected > 0");
    for (int n : cfg.n_list)
        if (n < 0) fail("cauchy.n: expected non-negative integers");
    for (double dl : cfg.delta)
        if (!(dl > 0.0 && dl < 1.0)) fail("analysis.delta: expected values in (0, 1)");
    if (cfg.N < 0) fail("analysis.N: expected >= 0");
    if (!(cfg.K > 1.0)) fail("analysis.K: expected > 1");
    for (int n : cfg.N_list)
        if (n < 0) fail("approximate.N: expected non-negative integers");
    if (cfg.offset_samples < 8) fail("approximate.samples: expected >= 8");
}

}  // namespace steklov
