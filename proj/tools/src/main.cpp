#include "levyscale/errors.hpp"
#include "levyscale/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::string> out;
    std::optional<long long> m;
    std::optional<double> tol;
    std::optional<std::string> grid;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "run configuration JSON")->required();
    cmd->add_option("--out", f.out, "output directory (overrides config)");
    cmd->add_option("--m", f.m, "truncation order (overrides config)");
    cmd->add_option("--tol", f.tol, "bisection tolerance (overrides config)");
    cmd->add_option("--grid", f.grid, "evaluation grid a:b:step (overrides config)");
}

levyscale::harness::RunConfig load(const CommonFlags& f) {
    auto cfg = levyscale::harness::config_from_json_file(f.config);
    if (f.out) cfg.out_dir = *f.out;
    if (f.m) {
        if (*f.m < 1) throw levyscale::ValidationError("truncation order m must be >= 1");
        cfg.m = static_cast<std::size_t>(*f.m);
    }
    if (f.tol) cfg.tol = *f.tol;
    if (f.grid) cfg.grid = levyscale::harness::parse_grid(*f.grid);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scale functions, certified truncation bounds and dividend policies\n"
                 "for spectrally negative Levy processes"};
    app.require_subcommand(1);

    CommonFlags scale_f, roots_f, solve_f, bounds_f, sweep_f;
    std::string solve_kind, reproduce_section;
    std::optional<double> phi, S, K, delta;
    std::string reproduce_out = ".";

    add_common(app.add_subcommand("scale", "exact scale functions (finite models) or "
                                           "certified envelopes (meromorphic models)"),
               scale_f);
    add_common(app.add_subcommand("roots", "root/pole inventory with residue weights"),
               roots_f);

    CLI::App* solve = app.add_subcommand("solve", "dividend policy solvers");
    solve->add_option("kind", solve_kind, "classic|bailout|terminal|impulse")->required();
    add_common(solve, solve_f);
    solve->add_option("--phi", phi, "bail-out injection cost (> 1)");
    solve->add_option("--S", S, "terminal value intercept");
    solve->add_option("--K", K, "terminal value slope");
    solve->add_option("--delta", delta, "impulse transaction cost");

    add_common(app.add_subcommand("bounds", "certified scale-function envelopes and "
                                            "barrier enclosures (meromorphic models)"),
               bounds_f);
    add_common(app.add_subcommand("cgmy-sweep", "convergence sweep towards a CGMY target"),
               sweep_f);

    CLI::App* rep = app.add_subcommand("reproduce", "regenerate a bundled experiment suite");
    rep->add_option("section", reproduce_section, "5.1 or 5.2")->required();
    rep->add_option("--out", reproduce_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage problems are validation errors
    }

    try {
        std::string manifest;
        if (app.got_subcommand("scale")) {
            manifest = levyscale::harness::run_scale(load(scale_f));
        } else if (app.got_subcommand("roots")) {
            manifest = levyscale::harness::run_roots(load(roots_f));
        } else if (app.got_subcommand("solve")) {
            auto cfg = load(solve_f);
            if (!cfg.solver) cfg.solver.emplace();
            cfg.solver->kind = solve_kind;
            if (phi) cfg.solver->phi = *phi;
            if (S) cfg.solver->S = *S;
            if (K) cfg.solver->K = *K;
            if (delta) cfg.solver->delta_cost = *delta;
            manifest = levyscale::harness::run_solve(cfg);
        } else if (app.got_subcommand("bounds")) {
            manifest = levyscale::harness::run_bounds(load(bounds_f));
        } else if (app.got_subcommand("cgmy-sweep")) {
            manifest = levyscale::harness::run_cgmy_sweep(load(sweep_f));
        } else if (app.got_subcommand("reproduce")) {
            manifest = levyscale::harness::reproduce_figures(reproduce_section, reproduce_out);
        }
        std::cout << manifest << std::endl;
    } catch (const levyscale::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << std::endl;
        return 2;
    } catch (const levyscale::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
    return 0;
}
