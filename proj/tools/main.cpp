// steklov: command-line front end. Every subcommand takes a JSON config;
// flags override the matching config keys.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steklov/commands.hpp"
#include "steklov/error.hpp"

namespace {

using namespace steklov;

struct Overrides {
    std::string config_path;
    std::string preset;
    std::string solver;
    std::string formulation;
    std::optional<int> n_nodes, N_tr, n_keep, resolution, index;
    std::optional<double> alpha;
    std::vector<double> box, point;
    std::vector<int> n_list, N_list;
    std::string output;
    bool no_verify = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("-c,--config", o.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "replace the domain by a preset");
    sub->add_option("--solver", o.solver, "bie | disk | both");
    sub->add_option("--formulation", o.formulation, "regularized | naive");
    sub->add_option("--n-nodes", o.n_nodes, "BIE node count");
    sub->add_option("--N-tr", o.N_tr, "disk truncation order");
    sub->add_option("--n-keep", o.n_keep, "number of eigenpairs");
    sub->add_option("--alpha", o.alpha, "contour shift fraction");
    sub->add_option("--resolution", o.resolution, "grid cells per side");
    sub->add_option("--box", o.box, "x_min x_max y_min y_max")->expected(4);
    sub->add_option("--output,-o", o.output, "output directory");
    sub->add_flag("--no-verify", o.no_verify, "skip the BIE refinement check");
}

RunConfig build_config(const Overrides& o) {
    RunConfig cfg = load_config(o.config_path);
    if (!o.preset.empty()) cfg.domain = DomainSpec{o.preset, {}, {}, std::nullopt};
    if (!o.solver.empty()) cfg.solver = parse_solver(o.solver);
    if (!o.formulation.empty()) cfg.formulation = parse_formulation(o.formulation);
    if (o.n_nodes) cfg.n_nodes = *o.n_nodes;
    if (o.N_tr) cfg.N_tr = *o.N_tr;
    if (o.n_keep) cfg.n_keep = *o.n_keep;
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.resolution) cfg.resolution = *o.resolution;
    if (o.box.size() == 4) cfg.box = Box{o.box[0], o.box[1], o.box[2], o.box[3]};
    if (o.index) cfg.render_index = *o.index;
    if (o.point.size() == 2) cfg.point = Point2{o.point[0], o.point[1]};
    if (!o.n_list.empty()) cfg.n_list = o.n_list;
    if (!o.N_list.empty()) cfg.N_list = o.N_list;
    if (!o.output.empty()) cfg.output_dir = o.output;
    if (o.no_verify) cfg.verify = false;
    validate_config(cfg);
    return cfg;
}

int report(const Error& e) {
    std::cerr << "error: kind=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
    return e.kind() == ErrorKind::ConfigError ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steklov eigenvalue solver and nodal-set analysis"};
    app.require_subcommand(1);
    Overrides o;

    using Runner = CommandOutput (*)(const RunConfig&);
    std::vector<std::pair<CLI::App*, Runner>> subs;
    auto add = [&](const char* name, const char* help, Runner fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        subs.emplace_back(sub, fn);
        return sub;
    };
    add("spectrum", "eigenvalues (and cross-solver differences)", run_spectrum);
    auto* cauchy = add("cauchy-table", "plain vs contour-shifted B_n coefficients", run_cauchy_table);
    cauchy->add_option("--point", o.point, "evaluation point x1 x2")->expected(2);
    cauchy->add_option("--n", o.n_list, "coefficient indices");
    auto* render = add("render", "sign map, nodal lines and field grid", run_render);
    render->add_option("--index", o.index, "eigenvalue index j");
    auto* approx = add("approximate", "truncated square-root map approximation", run_approximate);
    approx->add_option("--N", o.N_list, "truncation orders");
    add("tunneling", "tunneling constants per eigenpair", run_tunneling);
    add("remainder", "remainder ratios and fitted bound", run_remainder);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = build_config(o);
        for (auto& [sub, fn] : subs) {
            if (!sub->parsed()) continue;
            const CommandOutput out = fn(cfg);
            write_artifacts(cfg.output_dir, out);
            for (const auto& note : out.notes) std::cerr << note << '\n';
            for (const auto& f : out.files) std::cout << cfg.output_dir << '/' << f.name << '\n';
        }
    } catch (const Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "error: kind=Internal message=\"" << e.what() << "\"\n";
        return 3;
    }
    return 0;
}
