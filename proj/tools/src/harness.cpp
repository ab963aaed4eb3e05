#include "levyscale/harness.hpp"

#include "levyscale/dividends.hpp"
#include "levyscale/errors.hpp"
#include "levyscale/model_io.hpp"
#include "levyscale/roots.hpp"
#include "levyscale/scale.hpp"
#include "levyscale/wiener_hopf.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#ifndef LEVYSCALE_DATA_DIR
#define LEVYSCALE_DATA_DIR "."
#endif

namespace levyscale::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kResidualGate = 1e-6;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// JSON cannot carry infinities; encode them as strings.
json num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json grid_json(const GridSpec& g) {
    return json{{"min", g.min}, {"max", g.max}, {"step", g.step}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    os << text;
    if (text.empty() || text.back() != '\n') os << '\n';
}

// Generic multi-column CSV: header then one row per grid point.
void write_columns_csv(const fs::path& path, const std::string& header,
                       double a, double b, double step,
                       const std::vector<std::function<double(double)>>& cols) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path.string());
    os << header << '\n';
    const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double x = a + step * static_cast<double>(i);
        os << fmt(x);
        for (const auto& f : cols) os << ',' << fmt(f(x));
        os << '\n';
    }
}

struct Pipeline {
    RootSystem rs;
    FactorCoefficients fc;
    IdentityReport ir;
    std::optional<ScaleBundle> bundle;     // finite models
    std::optional<TruncationBounds> tb;    // meromorphic models
    double laplace_worst = 0.0;
};

Pipeline build_pipeline(const SpectralModel& model, double q, std::size_t m, double tol) {
    Pipeline p;
    const bool mero = is_meromorphic(model);
    p.rs = solve_roots(model, q, mero ? m : 0, tol);
    p.fc = compute_coefficients(model, p.rs);
    p.ir = check_identities(model, p.rs, p.fc);
    if (mero) {
        p.tb = build_scale_meromorphic(model, p.rs, p.fc);
        p.laplace_worst = laplace_check(model, *p.tb);
    } else {
        p.bundle = build_scale_finite(model, p.rs, p.fc);
        p.laplace_worst = laplace_check(model, *p.bundle);
    }
    return p;
}

json identities_json(const IdentityReport& ir) {
    json j;
    if (ir.mass_residual) j["mass_residual"] = num(*ir.mass_residual);
    if (ir.lemma_residual) j["lemma_residual"] = num(*ir.lemma_residual);
    if (ir.kappa_residual) j["kappa_residual"] = num(*ir.kappa_residual);
    if (ir.residue_worst) j["residue_worst"] = num(*ir.residue_worst);
    if (ir.partial_sums_grow) j["partial_sums_grow"] = *ir.partial_sums_grow;
    j["worst"] = num(ir.worst());
    return j;
}

json scalars_json(const Pipeline& p) {
    json j;
    j["zeta_q"] = num(p.rs.zeta);
    j["zeta_residual"] = num(p.rs.zeta_residual);
    j["varrho_q"] = num(p.fc.varrho);
    j["kappa_q"] = num(p.fc.kappa);
    j["theta"] = num(p.fc.theta);
    j["psi_prime_zeta"] = num(p.fc.psi_prime_zeta);
    j["delta_m"] = num(p.fc.delta_m);
    j["epsilon_m"] = num(p.fc.epsilon_m);
    if (p.fc.atom != 0.0) j["atom"] = num(p.fc.atom);
    j["negative_roots"] = p.rs.xis.size();
    if (p.rs.truncated) j["next_xi"] = num(p.rs.next_xi);
    return j;
}

json manifest_skeleton(const std::string& verb, const RunConfig& cfg, const Pipeline& p) {
    json j;
    j["verb"] = verb;
    const bool ok = p.ir.worst() <= kResidualGate && p.laplace_worst <= kResidualGate;
    j["status"] = ok ? "ok" : "failed";
    j["model"] = json::parse(model_to_json(cfg.model));
    j["q"] = cfg.q;
    j["tol"] = cfg.tol;
    if (p.rs.truncated) j["m"] = cfg.m;
    j["grid"] = grid_json(cfg.grid);
    j["scalars"] = scalars_json(p);
    j["identities"] = identities_json(p.ir);
    j["laplace_worst"] = num(p.laplace_worst);
    return j;
}

std::string finish_manifest(json& manifest, const fs::path& dir,
                            std::vector<std::string> artifacts) {
    artifacts.emplace_back("manifest.json");
    manifest["artifacts"] = artifacts;
    const std::string text = manifest.dump(2);
    write_text(dir / "manifest.json", text);
    return text;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);
    return dir;
}

json policy_json(const PolicyResult& r) {
    json j;
    switch (r.kind) {
        case PolicyKind::ClassicBarrier: j["kind"] = "classic"; break;
        case PolicyKind::BailOut: j["kind"] = "bailout"; break;
        case PolicyKind::TerminalValue: j["kind"] = "terminal"; break;
        case PolicyKind::Impulse: j["kind"] = "impulse"; break;
    }
    j["levels"] = r.levels;
    j["threshold"] = num(r.threshold);
    if (r.level_interval)
        j["level_interval"] = {num(r.level_interval->first), num(r.level_interval->second)};
    json d;
    d["residual"] = num(r.diagnostics.residual);
    d["run_strategy"] = r.diagnostics.run_strategy;
    d["boundary"] = r.diagnostics.boundary;
    d["monotone_tail"] = r.diagnostics.monotone_tail;
    if (r.diagnostics.w_min_lower != 0.0 || r.diagnostics.w_min_upper != 0.0) {
        d["w_min_lower"] = num(r.diagnostics.w_min_lower);
        d["w_min_upper"] = num(r.diagnostics.w_min_upper);
        d["delta_m"] = num(r.diagnostics.delta_m);
    }
    j["diagnostics"] = d;
    return j;
}

PolicyResult dispatch_solver(const ScaleBundle& b, const SolverSpec& spec, double tol) {
    if (spec.kind == "classic") return classic_barrier(b, tol);
    if (spec.kind == "bailout") return bailout_barrier(b, spec.phi, tol);
    if (spec.kind == "terminal") return terminal_barrier(b, spec.S, spec.K, tol);
    if (spec.kind == "impulse") return impulse_policy(b, spec.delta_cost, tol);
    throw ValidationError("unknown solver kind '" + spec.kind +
                          "' (expected classic|bailout|terminal|impulse)");
}

} // namespace

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    double vals[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t next = text.find(':', pos);
        const bool last = i == 2;
        if (last != (next == std::string::npos))
            throw ValidationError("grid must be a:b:step, got '" + text + "'");
        const std::string part = text.substr(pos, last ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            vals[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ValidationError("grid component '" + part + "' is not a number");
        }
        pos = next + 1;
    }
    g.min = vals[0];
    g.max = vals[1];
    g.step = vals[2];
    return g;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.grid.step > 0)) throw ValidationError("grid step must be > 0");
    if (!(cfg.grid.min <= cfg.grid.max)) throw ValidationError("grid min must not exceed max");
    if (!(cfg.tol > 0) || cfg.tol > 1e-4)
        throw ValidationError("tol must lie in (0, 1e-4]");
    if (cfg.m < 1) throw ValidationError("truncation order m must be >= 1");
    if (!(cfg.q > 0)) throw ValidationError("discount rate q must be > 0");
    if (cfg.betas.empty()) throw ValidationError("beta sequence must be non-empty");
    for (std::size_t i = 0; i < cfg.betas.size(); ++i) {
        if (!(cfg.betas[i] > 0)) throw ValidationError("beta values must be > 0");
        if (i > 0 && !(cfg.betas[i] < cfg.betas[i - 1]))
            throw ValidationError("beta sequence must be strictly decreasing");
    }
}

RunConfig config_from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config root must be an object");

    RunConfig cfg;
    try {
        if (j.contains("model_file")) {
            fs::path p = j.at("model_file").get<std::string>();
            if (p.is_relative()) p = fs::path(base_dir) / p;
            cfg.model = model_from_json_file(p.string());
        } else if (j.contains("model")) {
            cfg.model = model_from_json(j.at("model").dump());
        } else {
            throw ValidationError("config needs a 'model' object or a 'model_file' path");
        }
        if (j.contains("q")) cfg.q = j.at("q").get<double>();
        if (j.contains("m")) {
            const auto mval = j.at("m").get<long long>();
            if (mval < 1) throw ValidationError("truncation order m must be >= 1");
            cfg.m = static_cast<std::size_t>(mval);
        }
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.is_string()) {
                cfg.grid = parse_grid(g.get<std::string>());
            } else {
                if (g.contains("min")) cfg.grid.min = g.at("min").get<double>();
                if (g.contains("max")) cfg.grid.max = g.at("max").get<double>();
                if (g.contains("step")) cfg.grid.step = g.at("step").get<double>();
            }
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            SolverSpec spec;
            spec.kind = s.at("kind").get<std::string>();
            if (s.contains("phi")) spec.phi = s.at("phi").get<double>();
            if (s.contains("S")) spec.S = s.at("S").get<double>();
            if (s.contains("K")) spec.K = s.at("K").get<double>();
            if (s.contains("delta")) spec.delta_cost = s.at("delta").get<double>();
            cfg.solver = spec;
        }
        if (j.contains("betas")) cfg.betas = j.at("betas").get<std::vector<double>>();
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

RunConfig config_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return config_from_json(ss.str(), fs::path(path).parent_path().string());
}

std::string data_file(const std::string& name) {
    fs::path dir = LEVYSCALE_DATA_DIR;
    if (const char* env = std::getenv("LEVYSCALE_DATA_DIR")) dir = env;
    const fs::path p = dir / name;
    if (!fs::exists(p))
        throw ValidationError("data file not found: " + p.string() +
                              " (set LEVYSCALE_DATA_DIR to override)");
    return p.string();
}

std::string run_scale(const RunConfig& cfg) {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg.out_dir);
    const Pipeline p = build_pipeline(cfg.model, cfg.q, cfg.m, cfg.tol);
    json manifest = manifest_skeleton("scale", cfg, p);
    std::vector<std::string> artifacts;
    if (p.bundle) {
        std::ofstream os(dir / "scale.csv");
        export_csv(os, *p.bundle, cfg.grid.min, cfg.grid.max, cfg.grid.step);
        artifacts.emplace_back("scale.csv");
    } else {
        // Meromorphic families have no exact finite expansion; the certified
        // envelopes are the scale-function artifact.
        std::ofstream os(dir / "bounds.csv");
        export_csv(os, *p.tb, cfg.grid.min, cfg.grid.max, cfg.grid.step);
        artifacts.emplace_back("bounds.csv");
    }
    return finish_manifest(manifest, dir, std::move(artifacts));
}

std::string run_roots(const RunConfig& cfg) {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg.out_dir);
    const Pipeline p = build_pipeline(cfg.model, cfg.q, cfg.m, cfg.tol);
    json manifest = manifest_skeleton("roots", cfg, p);

    json r;
    r["zeta"] = num(p.rs.zeta);
    r["zeta_residual"] = num(p.rs.zeta_residual);
    r["xis"] = p.rs.xis;
    r["xi_residuals"] = p.rs.xi_residuals;
    r["poles"] = p.rs.poles;
    r["truncated"] = p.rs.truncated;
    if (p.rs.truncated) r["next_xi"] = num(p.rs.next_xi);
    r["variation"] = p.rs.variation == PathVariation::BoundedVariation ? "bounded" : "unbounded";
    r["A"] = p.fc.A;
    r["C"] = p.fc.C;
    if (p.fc.atom != 0.0) r["atom"] = num(p.fc.atom);
    write_text(dir / "roots.json", r.dump(2));
    return finish_manifest(manifest, dir, {"roots.json"});
}

std::string run_solve(const RunConfig& cfg) {
    validate(cfg);
    if (!cfg.solver) throw ValidationError("solve requires a solver section in the config");
    if (is_meromorphic(cfg.model))
        throw ValidationError("point solvers need an exact expansion; "
                              "meromorphic models are handled by the bounds verb");
    const fs::path dir = prepare_out_dir(cfg.out_dir);
    const Pipeline p = build_pipeline(cfg.model, cfg.q, cfg.m, cfg.tol);
    const PolicyResult res = dispatch_solver(*p.bundle, *cfg.solver, cfg.tol);

    json manifest = manifest_skeleton("solve", cfg, p);
    json s = policy_json(res);
    s["phi"] = cfg.solver->phi;
    s["S"] = cfg.solver->S;
    s["K"] = cfg.solver->K;
    s["delta"] = cfg.solver->delta_cost;
    manifest["solver"] = s;
    write_text(dir / "solver.json", s.dump(2));

    write_columns_csv(dir / "value.csv", "x,value", cfg.grid.min, cfg.grid.max, cfg.grid.step,
                      {[&](double x) { return eval_value(res, x); }});
    return finish_manifest(manifest, dir, {"solver.json", "value.csv"});
}

std::string run_bounds(const RunConfig& cfg) {
    validate(cfg);
    if (!is_meromorphic(cfg.model))
        throw ValidationError("bounds apply to meromorphic models; "
                              "finite models have exact scale functions (use scale)");
    const fs::path dir = prepare_out_dir(cfg.out_dir);
    const Pipeline p = build_pipeline(cfg.model, cfg.q, cfg.m, cfg.tol);
    json manifest = manifest_skeleton("bounds", cfg, p);

    {
        std::ofstream os(dir / "bounds.csv");
        export_csv(os, *p.tb, cfg.grid.min, cfg.grid.max, cfg.grid.step);
    }

    const PolicyResult enc = classic_bounds(*p.tb, cfg.tol);
    json b;
    b["classic"] = policy_json(enc);
    if (cfg.solver && cfg.solver->kind == "bailout") {
        b["bailout"] = policy_json(bailout_bounds(*p.tb, cfg.solver->phi, cfg.tol));
        b["bailout"]["phi"] = cfg.solver->phi;
    }
    write_text(dir / "bounds.json", b.dump(2));
    manifest["enclosures"] = b;

    if (enc.u_lower && enc.u_upper) {
        write_columns_csv(dir / "u_bounds.csv", "x,u_lower,u_upper,u_mid",
                          cfg.grid.min, cfg.grid.max, cfg.grid.step,
                          {[&](double x) { return enc.u_lower->eval(x); },
                           [&](double x) { return enc.u_upper->eval(x); },
                           [&](double x) {
                               return 0.5 * (enc.u_lower->eval(x) + enc.u_upper->eval(x));
                           }});
        return finish_manifest(manifest, dir, {"bounds.csv", "bounds.json", "u_bounds.csv"});
    }
    return finish_manifest(manifest, dir, {"bounds.csv", "bounds.json"});
}

std::string run_cgmy_sweep(const RunConfig& cfg) {
    validate(cfg);
    const auto* target = std::get_if<CgmyTarget>(&cfg.model.jumps);
    if (!target)
        throw ValidationError("cgmy-sweep needs a model with jumps.type = cgmy");
    if (cfg.grid.min != 0.0)
        throw ValidationError("cgmy-sweep grid must start at 0");
    const fs::path dir = prepare_out_dir(cfg.out_dir);

    const std::size_t points =
        static_cast<std::size_t>(std::floor(cfg.grid.max / cfg.grid.step + 1e-9)) + 1;
    const ConvergenceReport rep =
        cgmy_sweep(*target, cfg.model.sigma, cfg.model.drift, cfg.q, cfg.betas, cfg.m,
                   cfg.tol, cfg.grid.max, points);

    // Per-beta pipelines again for the manifest residuals (the sweep itself
    // does not surface them).
    double ident_worst = 0.0, laplace_worst = 0.0;
    json per_beta = json::array();
    for (const auto& pt : rep.points) {
        const SpectralModel coupled = make_model(
            cfg.model.sigma, cfg.model.drift,
            BetaFamily{target->c * std::pow(pt.beta, target->shape), target->alpha / pt.beta,
                       pt.beta, target->shape});
        const Pipeline p = build_pipeline(coupled, cfg.q, cfg.m, cfg.tol);
        ident_worst = std::max(ident_worst, p.ir.worst());
        laplace_worst = std::max(laplace_worst, p.laplace_worst);
        json row;
        row["beta"] = pt.beta;
        row["zeta"] = num(pt.zeta);
        row["delta_m"] = num(pt.delta_m);
        row["interval"] = {num(pt.interval.first), num(pt.interval.second)};
        row["density_at_m1"] = num(pt.density_at_m1);
        row["identities"] = identities_json(p.ir);
        row["laplace_worst"] = num(p.laplace_worst);
        per_beta.push_back(row);
    }

    json manifest;
    manifest["verb"] = "cgmy-sweep";
    const bool ok = ident_worst <= kResidualGate && laplace_worst <= kResidualGate;
    manifest["status"] = ok ? "ok" : "failed";
    manifest["model"] = json::parse(model_to_json(cfg.model));
    manifest["q"] = cfg.q;
    manifest["m"] = cfg.m;
    manifest["tol"] = cfg.tol;
    manifest["grid"] = grid_json(cfg.grid);
    manifest["betas"] = cfg.betas;
    manifest["points"] = per_beta;
    json sup = json::array();
    for (double d : rep.sup_diffs) sup.push_back(num(d));
    manifest["sup_diffs"] = sup;
    manifest["monotone"] = rep.monotone;
    manifest["target_density_at_m1"] = num(rep.target_density_at_m1);
    manifest["identities"] = {{"worst", num(ident_worst)}};
    manifest["laplace_worst"] = num(laplace_worst);

    {
        std::ofstream os(dir / "sweep.csv");
        if (!os) throw ValidationError("cannot write sweep.csv");
        os << "beta,zeta,delta_m,interval_lo,interval_hi,density_at_m1\n";
        for (const auto& pt : rep.points) {
            os << fmt(pt.beta) << ',' << fmt(pt.zeta) << ',' << fmt(pt.delta_m) << ','
               << fmt(pt.interval.first) << ',' << fmt(pt.interval.second) << ','
               << fmt(pt.density_at_m1) << '\n';
        }
    }
    {
        std::ofstream os(dir / "u_mid.csv");
        if (!os) throw ValidationError("cannot write u_mid.csv");
        os << "x";
        for (const auto& pt : rep.points) os << ",beta_" << fmt(pt.beta);
        os << '\n';
        for (std::size_t i = 0; i < rep.grid.size(); ++i) {
            os << fmt(rep.grid[i]);
            for (const auto& pt : rep.points) os << ',' << fmt(pt.u_mid[i]);
            os << '\n';
        }
    }
    return finish_manifest(manifest, dir, {"sweep.csv", "u_mid.csv"});
}

namespace {

// ---------------------------------------------------------------- reproduce

struct NamedRun {
    double sigma;
    Pipeline pipe;
    PolicyResult classic, bailout, term_neg, term_pos, imp_half, imp_tenth;
};

json compare(const std::string& label, double computed, double reference, double tol_abs) {
    json j;
    j["target"] = label;
    j["computed"] = num(computed);
    j["reference"] = reference;
    j["delta"] = num(computed - reference);
    j["within_tolerance"] = std::abs(computed - reference) <= tol_abs;
    return j;
}

std::string reproduce_51(const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const SpectralModel base = model_from_json_file(data_file("weibull_hyperexp_m6.json"));
    const double q = 0.03, tol = 1e-10, phi = 1.3;
    const std::vector<double> sigmas{0.0, 0.2, 0.4};

    std::vector<NamedRun> runs;
    for (double s : sigmas) {
        NamedRun r;
        r.sigma = s;
        const SpectralModel model = make_model(s, base.drift, base.jumps);
        r.pipe = build_pipeline(model, q, 0, tol);
        const ScaleBundle& b = *r.pipe.bundle;
        r.classic = classic_barrier(b, tol);
        r.bailout = bailout_barrier(b, phi, tol);
        r.term_neg = terminal_barrier(b, -1.0, 0.0, tol);
        r.term_pos = terminal_barrier(b, 1.0, 0.0, tol);
        r.imp_half = impulse_policy(b, 0.5, tol);
        r.imp_tenth = impulse_policy(b, 0.1, tol);
        runs.push_back(std::move(r));
    }

    const double a = 0.0, bmax = 3.0, step = 0.01;
    auto curve_csv = [&](const std::string& name, const std::string& suffix,
                         const std::function<double(const NamedRun&, double)>& f) {
        std::string header = "x";
        std::vector<std::function<double(double)>> cols;
        for (const auto& r : runs) {
            header += ",sigma_" + fmt(r.sigma) + suffix;
            const NamedRun* run = &r;
            cols.push_back([run, f](double x) { return f(*run, x); });
        }
        write_columns_csv(dir / name, header, a, bmax, step, cols);
    };

    curve_csv("fig1_W.csv", "", [](const NamedRun& r, double x) {
        return eval(*r.pipe.bundle, Curve::W, x);
    });
    curve_csv("fig1_W_prime.csv", "", [](const NamedRun& r, double x) {
        return eval(*r.pipe.bundle, Curve::Wprime, x);
    });
    curve_csv("fig2_classic_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.classic, x);
    });
    curve_csv("fig3_bailout_G.csv", "", [phi, q](const NamedRun& r, double x) {
        const ScaleBundle& b = *r.pipe.bundle;
        const double W = eval(b, Curve::W, x);
        return (phi * eval(b, Curve::Z, x) - 1.0) * eval(b, Curve::Wprime, x) - phi * q * W * W;
    });
    curve_csv("fig3_bailout_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.bailout, x);
    });
    auto terminal_F = [q](const NamedRun& r, double S, double x) {
        const ScaleBundle& b = *r.pipe.bundle;
        const double A = S * q * eval(b, Curve::W, x); // K = 0
        return (1.0 - A) / eval(b, Curve::Wprime, x);
    };
    curve_csv("fig4i_F.csv", "", [&](const NamedRun& r, double x) {
        return terminal_F(r, -1.0, x);
    });
    curve_csv("fig4i_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.term_neg, x);
    });
    curve_csv("fig4ii_F.csv", "", [&](const NamedRun& r, double x) {
        return terminal_F(r, 1.0, x);
    });
    curve_csv("fig4ii_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.term_pos, x);
    });
    curve_csv("fig5i_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.imp_half, x);
    });
    curve_csv("fig5ii_value.csv", "", [](const NamedRun& r, double x) {
        return eval_value(r.imp_tenth, x);
    });

    // Recorded reference levels for the printed barriers/policies.
    const double ref_classic[3] = {0.05, 0.481, 0.643};
    const double ref_bailout[3] = {0.38, 0.775, 1.495};
    const double ref_term_neg[3] = {0.0628, 0.0793, 0.1384};
    const double ref_term_pos[3] = {0.0317, 0.0383, 0.0955};
    const double ref_imp_half[3][2] = {{0.0, 1.173}, {0.069, 1.527}, {0.0, 1.885}};
    const double ref_imp_tenth[3][2] = {{0.0, 0.05}, {0.222, 0.481}, {0.197, 0.643}};

    json comps = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string sig = "sigma_" + fmt(runs[i].sigma);
        comps.push_back(compare("classic_a*_" + sig, runs[i].classic.threshold,
                                ref_classic[i], 0.01));
        comps.push_back(compare("bailout_d*_" + sig, runs[i].bailout.threshold,
                                ref_bailout[i], 0.01));
        comps.push_back(compare("terminal_b*_S-1_" + sig, runs[i].term_neg.threshold,
                                ref_term_neg[i], 0.005));
        comps.push_back(compare("terminal_b*_S+1_" + sig, runs[i].term_pos.threshold,
                                ref_term_pos[i], 0.005));
        comps.push_back(compare("impulse_c1_d0.5_" + sig, runs[i].imp_half.levels[0],
                                ref_imp_half[i][0], 0.02));
        comps.push_back(compare("impulse_c2_d0.5_" + sig, runs[i].imp_half.levels[1],
                                ref_imp_half[i][1], 0.02));
        comps.push_back(compare("impulse_c1_d0.1_" + sig, runs[i].imp_tenth.levels[0],
                                ref_imp_tenth[i][0], 0.02));
        comps.push_back(compare("impulse_c2_d0.1_" + sig, runs[i].imp_tenth.levels[1],
                                ref_imp_tenth[i][1], 0.02));
    }
    std::size_t within = 0;
    for (const auto& c : comps)
        if (c.at("within_tolerance").get<bool>()) ++within;

    json summary;
    summary["section"] = "5.1";
    summary["figure_groups"] = 5;
    summary["model"] = json::parse(model_to_json(base));
    summary["q"] = q;
    summary["sigmas"] = sigmas;
    double ident = 0.0, lap = 0.0;
    for (const auto& r : runs) {
        ident = std::max(ident, r.pipe.ir.worst());
        lap = std::max(lap, r.pipe.laplace_worst);
    }
    summary["identity_worst"] = num(ident);
    summary["laplace_worst"] = num(lap);
    summary["scale_construction_status"] =
        (ident <= kResidualGate && lap <= kResidualGate) ? "ok" : "failed";
    summary["comparisons"] = comps;
    summary["reference_values_compared"] = comps.size();
    summary["within_tolerance"] = within;

    const std::string text = summary.dump(2);
    write_text(dir / "summary.json", text);
    return text;
}

std::string reproduce_52(const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const double q = 0.03, sigma = 0.2, drift = 0.1, tol = 1e-10;
    const double c = 0.1, alpha = 3.0, shape = 1.5;
    const std::vector<double> betas{1.0, 0.5, 0.25, 0.125};

    json summary;
    summary["section"] = "5.2";
    summary["q"] = q;

    // Bound curves for the base model (beta = 1) at two truncation orders.
    json orders = json::array();
    double ident = 0.0, lap = 0.0;
    for (std::size_t m : {std::size_t{15}, std::size_t{150}}) {
        const SpectralModel model = make_model(sigma, drift, BetaFamily{c, alpha, 1.0, shape});
        const Pipeline p = build_pipeline(model, q, m, tol);
        ident = std::max(ident, p.ir.worst());
        lap = std::max(lap, p.laplace_worst);
        {
            std::ofstream os(dir / ("fig6_bounds_m" + std::to_string(m) + ".csv"));
            export_csv(os, *p.tb, 0.0, 2.0, 0.004);
        }
        const PolicyResult enc = classic_bounds(*p.tb, tol);
        json o;
        o["m"] = m;
        o["delta_m"] = num(p.fc.delta_m);
        o["epsilon_m"] = num(p.fc.epsilon_m);
        o["classic"] = policy_json(enc);
        orders.push_back(o);
    }
    summary["truncation_orders"] = orders;

    // Convergence sweep towards the CGMY target.
    const CgmyTarget target{c, alpha, shape};
    const ConvergenceReport rep = cgmy_sweep(target, sigma, drift, q, betas, 150, tol);
    {
        std::ofstream os(dir / "fig7_W_mid.csv");
        if (!os) throw ValidationError("cannot write fig7_W_mid.csv");
        os << "x";
        for (double b : betas) os << ",beta_" << fmt(b);
        os << '\n';
        std::vector<TruncationBounds> tbs;
        for (double b : betas) {
            const SpectralModel coupled = make_model(
                sigma, drift, BetaFamily{c * std::pow(b, shape), alpha / b, b, shape});
            Pipeline p = build_pipeline(coupled, q, 150, tol);
            ident = std::max(ident, p.ir.worst());
            lap = std::max(lap, p.laplace_worst);
            tbs.push_back(std::move(*p.tb));
        }
        for (double x : rep.grid) {
            os << fmt(x);
            for (const auto& tb : tbs)
                os << ',' << fmt(0.5 * (eval(tb, BoundCurve::WLower, x) +
                                        eval(tb, BoundCurve::WUpper, x)));
            os << '\n';
        }
    }
    {
        std::ofstream os(dir / "fig8_u_mid.csv");
        if (!os) throw ValidationError("cannot write fig8_u_mid.csv");
        os << "x";
        for (const auto& pt : rep.points) os << ",beta_" << fmt(pt.beta);
        os << '\n';
        for (std::size_t i = 0; i < rep.grid.size(); ++i) {
            os << fmt(rep.grid[i]);
            for (const auto& pt : rep.points) os << ',' << fmt(pt.u_mid[i]);
            os << '\n';
        }
    }

    json sweep;
    sweep["betas"] = betas;
    json sup = json::array();
    for (double d : rep.sup_diffs) sup.push_back(num(d));
    sweep["sup_diffs"] = sup;
    sweep["monotone"] = rep.monotone;
    json dens = json::array();
    for (const auto& pt : rep.points) dens.push_back(num(pt.density_at_m1));
    sweep["density_at_m1"] = dens;
    sweep["target_density_at_m1"] = num(rep.target_density_at_m1);
    summary["sweep"] = sweep;
    summary["identity_worst"] = num(ident);
    summary["laplace_worst"] = num(lap);
    summary["status"] = (ident <= kResidualGate && lap <= kResidualGate) ? "ok" : "failed";

    const std::string text = summary.dump(2);
    write_text(dir / "summary.json", text);
    return text;
}

} // namespace

std::string reproduce_figures(const std::string& section, const std::string& out_dir) {
    if (section == "5.1") return reproduce_51(out_dir);
    if (section == "5.2") return reproduce_52(out_dir);
    throw ValidationError("unknown section '" + section + "' (expected 5.1 or 5.2)");
}

} // namespace levyscale::harness
