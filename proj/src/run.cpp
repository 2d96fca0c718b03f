#include "mhdsim/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

namespace fs = std::filesystem;

InterfaceField cosine(int n, double amp, int k1, int k2) {
    return InterfaceField::sample(n, [=](double x1, double x2) {
        return amp * std::cos(k1 * x1 + k2 * x2);
    });
}

// cosine amplitude of mode (k1, k2): 2 Re c_k
double cos_amplitude(const InterfaceField& g, int k1, int k2) {
    const int n = g.grid_size();
    auto c = spectral::to_spectral(g);
    const int i = ((k1 % n) + n) % n;
    const int j = ((k2 % n) + n) % n;
    return 2.0 * c[static_cast<size_t>(j) * n + i].real();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::trunc);
    if (!out)
        throw ParseError("cannot open output file: " + p.string());
    return out;
}

DynamicsContext make_context(const RunConfig& cfg, const SurfaceCurrent& current) {
    DynamicsContext ctx;
    ctx.current = current;
    ctx.fstar = InterfaceField(cfg.n);
    ctx.c0 = cfg.c0;
    ctx.c1 = cfg.c1;
    ctx.m = cfg.m;
    ctx.tol = cfg.tol;
    ctx.monitor = true;
    return ctx;
}

// Scenario presets with a curved initial interface carry their magnetic data
// through the wall means and the recovery solvers (a constant h0 would not be
// tangent to the interface); flat presets validate through init_state.
PlasmaVacuumState make_initial_state(const RunConfig& cfg, const InitialData& id) {
    if (cfg.scenario.name == "perturbed") {
        PlasmaVacuumState st;
        st.f = id.f0;
        st.theta = InterfaceField(cfg.n);
        st.omega_star = BulkVector(Side::plasma, cfg.n, cfg.m);
        st.j_star = BulkVector(Side::plasma, cfg.n, cfg.m);
        st.gamma = {4.0 * M_PI * M_PI, 0.0}; // wall mean of h = (1,0,0)
        st.c0 = cfg.c0;
        st.validate();
        return st;
    }
    InitParams p;
    p.c0 = cfg.c0;
    p.c1 = cfg.c1;
    p.m = cfg.m;
    return init_state(id.f0, id.u0, id.h0, id.current, p);
}

nlohmann::ordered_json direct_run(const RunConfig& cfg, const fs::path& dir) {
    InitialData id = build_scenario(cfg);
    PlasmaVacuumState st = make_initial_state(cfg, id);
    DynamicsContext ctx = make_context(cfg, id.current);
    TimeStepConfig ts{cfg.dt, cfg.cfl, cfg.dt_max, cfg.t_end};
    const double f_mean0 = spectral::mean(st.f);

    std::ofstream diag = open_out(dir / "diagnostics.jsonl");
    long step = 0;
    double lambda_floor = std::numeric_limits<double>::infinity();
    try {
        while (true) {
            MapPair maps = build_maps(st.f, ctx.fstar, cfg.c0, cfg.m);
            RecoveredFields rec = recover_all(st, maps, ctx.current, cfg.tol);
            DiagnosticsRecord r = make_record(st, rec, maps, cfg.s, f_mean0, ctx.fstar);
            diag << record_json(r) << "\n";
            lambda_floor = std::min(lambda_floor, r.lambda_min);
            if (r.lambda_min < cfg.c1)
                throw StabilityError("stability monitor dropped below c1");
            if (st.time >= cfg.t_end - 1e-12)
                break;
            if (cfg.max_steps >= 0 && step >= cfg.max_steps)
                break;
            double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(rec, ts, cfg.n);
            dt = std::min(dt, cfg.t_end - st.time);
            st = rk4_step(st, dt, ctx, &rec, &maps);
            ++step;
        }
    } catch (...) {
        // keep the last state for post-mortem inspection
        write_snapshot((dir / "snapshot_failure.bin").string(), st);
        throw;
    }
    write_snapshot((dir / "snapshot_final.bin").string(), st);

    nlohmann::ordered_json summary;
    summary["mode"] = "direct";
    summary["steps"] = step;
    summary["final_time"] = st.time;
    summary["lambda_min"] = lambda_floor;
    summary["final_max_f"] = spectral::max_abs(st.f);
    summary["final_max_theta"] = spectral::max_abs(st.theta);
    return summary;
}

nlohmann::ordered_json linear_run(const RunConfig& cfg, const fs::path& dir) {
    InitialData id = build_scenario(cfg);
    PlasmaVacuumState st = make_initial_state(cfg, id);
    DynamicsContext ctx = make_context(cfg, id.current);

    // coefficients frozen at the initial state
    MapPair maps = build_maps(st.f, ctx.fstar, cfg.c0, cfg.m);
    RecoveredFields rec = recover_all(st, maps, ctx.current, cfg.tol);
    CoefficientFreeze fr = freeze_coefficients(rec, maps, cfg.tol);
    if (fr.lambda_min() < cfg.c1)
        throw StabilityError("frozen coefficients violate the stability condition");

    TimeStepConfig ts{cfg.dt, cfg.cfl, cfg.dt_max, cfg.t_end};
    double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(rec, ts, cfg.n);
    InterfaceField f = st.f, th = st.theta;
    const double f_mean0 = spectral::mean(f);
    const int n = cfg.n;

    std::ofstream diag = open_out(dir / "diagnostics.jsonl");
    std::ofstream trace = open_out(dir / "trace.csv");
    trace << "t,f_mode,theta_mode\n";
    trace.precision(17);
    double t = 0.0;
    long step = 0;
    while (true) {
        DiagnosticsRecord r;
        r.t = t;
        r.lambda_min = fr.lambda_min();
        r.e_s = energy_Es(f - ctx.fstar, th, fr, cfg.s);
        r.cal_e_s = energy_calEs(f - ctx.fstar, th, cfg.s);
        r.mean_f_drift = spectral::mean(f) - f_mean0;
        r.mean_theta = spectral::mean(th);
        diag << record_json(r) << "\n";
        trace << t << "," << cos_amplitude(f, cfg.scenario.k1, cfg.scenario.k2) << ","
              << cos_amplitude(th, cfg.scenario.k1, cfg.scenario.k2) << "\n";
        if (t >= cfg.t_end - 1e-12)
            break;
        if (cfg.max_steps >= 0 && step >= cfg.max_steps)
            break;
        const double h = std::min(dt, cfg.t_end - t);
        auto [kf1, kt1] = linearized_rhs(f, th, fr);
        auto [kf2, kt2] = linearized_rhs(f + 0.5 * h * kf1, th + 0.5 * h * kt1, fr);
        auto [kf3, kt3] = linearized_rhs(f + 0.5 * h * kf2, th + 0.5 * h * kt2, fr);
        auto [kf4, kt4] = linearized_rhs(f + h * kf3, th + h * kt3, fr);
        f += (h / 6.0) * (kf1 + 2.0 * kf2 + 2.0 * kf3 + kf4);
        th += (h / 6.0) * (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4);
        f = spectral::dealias(spectral::mean_project(f)) + InterfaceField(n, f_mean0);
        th = spectral::dealias(spectral::mean_project(th));
        t += h;
        ++step;
    }
    nlohmann::ordered_json summary;
    summary["mode"] = "linear";
    summary["steps"] = step;
    summary["final_time"] = t;
    summary["lambda_min"] = fr.lambda_min();
    return summary;
}

nlohmann::ordered_json picard_run(const RunConfig& cfg, const fs::path& dir) {
    InitialData id = build_scenario(cfg);
    PlasmaVacuumState st = make_initial_state(cfg, id);
    DynamicsContext ctx = make_context(cfg, id.current);

    std::ofstream log = open_out(dir / "contraction.jsonl");
    double T = cfg.picard_T;
    nlohmann::ordered_json summary;
    summary["mode"] = "picard";
    for (int attempt = 0; attempt <= cfg.bisection_max; ++attempt, T *= 0.5) {
        IterationConfig icfg;
        icfg.T = T;
        icfg.samples = cfg.picard_samples;
        icfg.max_iters = cfg.picard_max_iters;
        icfg.contraction_tol = cfg.contraction_tol;
        icfg.delta0 = cfg.delta0;
        icfg.s = cfg.s;
        icfg.fstar = ctx.fstar;
        ContractionReport rep;
        TrajectoryCandidate traj;
        try {
            std::tie(traj, rep) = picard_solve(st, icfg, ctx);
        } catch (const NoContraction&) {
            nlohmann::ordered_json line;
            line["T"] = T;
            line["result"] = "no_contraction";
            log << line.dump() << "\n";
            continue;
        }
        for (size_t i = 0; i < rep.distances.size(); ++i) {
            nlohmann::ordered_json line;
            line["T"] = T;
            line["iteration"] = i + 1;
            line["distance"] = rep.distances[i];
            if (i >= 1)
                line["ratio"] = rep.ratios[i - 1];
            log << line.dump() << "\n";
        }
        const bool all_half =
            std::all_of(rep.ratios.begin(), rep.ratios.end(),
                        [](double r) { return r <= 0.5; });
        const bool enough = rep.ratios.size() >= 3 || rep.converged;
        if (rep.converged && all_half && enough) {
            summary["working_T"] = T;
            summary["iterations"] = rep.iterations;
            summary["distances"] = rep.distances;
            summary["ratios"] = rep.ratios;
            write_snapshot((dir / "snapshot_final.bin").string(), traj.states.back());
            return summary;
        }
    }
    throw NoContraction("no contracting horizon found by bisection");
}

struct LevelRow {
    int n, m;
    double dt;
    LimitResiduals lim;
    InterfaceResiduals ir;
};

LevelRow convergence_level(const RunConfig& base, int scale, double dt) {
    RunConfig cfg = base;
    cfg.n = base.n * scale;
    cfg.m = base.m * scale;
    InitialData id = build_scenario(cfg);
    PlasmaVacuumState st = make_initial_state(cfg, id);
    DynamicsContext ctx = make_context(cfg, id.current);

    const int steps = base.refine_steps * scale;
    std::vector<PlasmaVacuumState> hist{st};
    for (int k = 0; k < steps; ++k) {
        st = rk4_step(st, dt, ctx);
        hist.push_back(st);
        if (hist.size() > 3)
            hist.erase(hist.begin());
    }
    LevelRow row;
    row.n = cfg.n;
    row.m = cfg.m;
    row.dt = dt;
    row.lim = limit_residuals(hist, ctx);
    MapPair maps = build_maps(st.f, ctx.fstar, cfg.c0, cfg.m);
    RecoveredFields rec = recover_all(st, maps, ctx.current, cfg.tol);
    row.ir = interface_residuals(st, rec, maps);
    return row;
}

nlohmann::ordered_json convergence_run(const RunConfig& cfg, const fs::path& dir) {
    // pick the coarse step from the CFL bound of the initial data
    double dt0 = cfg.dt;
    if (dt0 <= 0.0) {
        InitialData id = build_scenario(cfg);
        PlasmaVacuumState st = make_initial_state(cfg, id);
        MapPair maps = build_maps(st.f, InterfaceField(cfg.n), cfg.c0, cfg.m);
        RecoveredFields rec = recover_all(st, maps, id.current, cfg.tol);
        TimeStepConfig ts{cfg.dt, cfg.cfl, cfg.dt_max, cfg.t_end};
        dt0 = cfl_dt(rec, ts, cfg.n);
    }

    std::ofstream csv = open_out(dir / "convergence.csv");
    csv << "N,M,dt,w_norm,b_norm,w_normal,b_normal,pressure_balance,hN,hhatN,"
           "kinematic\n";
    csv.precision(17);
    std::vector<LevelRow> rows;
    for (int level = 0; level < 2; ++level) {
        const int scale = 1 << level;
        rows.push_back(convergence_level(cfg, scale, dt0 / scale));
        const LevelRow& r = rows.back();
        csv << r.n << "," << r.m << "," << r.dt << "," << r.lim.w_norm << ","
            << r.lim.b_norm << "," << r.lim.w_normal << "," << r.lim.b_normal << ","
            << r.ir.pressure_balance << "," << r.ir.h_normal << "," << r.ir.hhat_normal
            << "," << r.ir.kinematic << "\n";
    }
    nlohmann::ordered_json summary;
    summary["mode"] = "convergence";
    summary["coarse_w_norm"] = rows[0].lim.w_norm;
    summary["fine_w_norm"] = rows[1].lim.w_norm;
    summary["coarse_b_norm"] = rows[0].lim.b_norm;
    summary["fine_b_norm"] = rows[1].lim.b_norm;
    return summary;
}

} // namespace

InitialData build_scenario(const RunConfig& cfg) {
    const int n = cfg.n, m = cfg.m;
    InitialData id;
    id.f0 = InterfaceField(n);
    id.u0 = BulkVector(Side::plasma, n, m);
    id.h0 = BulkVector(Side::plasma, n, m);
    for (size_t k = 0; k < id.h0[0].size(); ++k)
        id.h0[0][k] = 1.0;
    id.current = SurfaceCurrent::constant(InterfaceField(n, cfg.current.j1),
                                          InterfaceField(n, cfg.current.j2));

    const std::string& name = cfg.scenario.name;
    if (name == "equilibrium") {
        // nothing else
    } else if (name == "perturbed") {
        id.f0 = cosine(n, cfg.scenario.eps, cfg.scenario.k1, cfg.scenario.k2);
    } else if (name == "sheared") {
        const ChebGrid& g = strip_grid(Side::plasma, m);
        for (int l = 0; l <= m; ++l) {
            const double u1 = cfg.scenario.shear * std::sin(M_PI * g.nodes[l]);
            const double h1 = 1.0 + cfg.scenario.shear * std::cos(M_PI * g.nodes[l]);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    id.u0[0].at(i, j, l) = u1;
                    id.h0[0].at(i, j, l) = h1;
                }
        }
    } else if (name == "collinear") {
        // imposed current whose vacuum response is parallel to h
        id.current = SurfaceCurrent::constant(InterfaceField(n), InterfaceField(n, -2.0));
    } else {
        throw ValidationError("unknown scenario \"" + name + "\"");
    }
    return id;
}

int run(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        return exit_code::config;

    nlohmann::ordered_json summary;
    int code = exit_code::ok;
    try {
        switch (cfg.mode) {
        case RunMode::direct:
            summary = direct_run(cfg, dir);
            break;
        case RunMode::linear:
            summary = linear_run(cfg, dir);
            break;
        case RunMode::picard:
            summary = picard_run(cfg, dir);
            break;
        case RunMode::convergence:
            summary = convergence_run(cfg, dir);
            break;
        }
        summary["status"] = "ok";
    } catch (const StabilityError& e) {
        summary["error"] = e.what();
        code = exit_code::stability;
    } catch (const GapViolation& e) {
        summary["error"] = e.what();
        code = exit_code::gap;
    } catch (const NoContraction& e) {
        summary["error"] = e.what();
        code = exit_code::no_contraction;
    } catch (const ValidationError& e) {
        summary["error"] = e.what();
        code = exit_code::config;
    } catch (const ParseError& e) {
        summary["error"] = e.what();
        code = exit_code::config;
    } catch (const std::exception& e) {
        summary["error"] = e.what();
        code = exit_code::solver;
    }
    summary["exit_code"] = code;
    summary["threads"] = worker_threads();
    std::ofstream out = open_out(dir / "summary.json");
    out << summary.dump(2) << "\n";
    return code;
}

} // namespace mhdsim
