#include "mhdsim/config.hpp"

#include <cstdlib>
#include <set>
#include <vector>

#include <json.hpp>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

bool power_of_two(long v) { return v >= 4 && (v & (v - 1)) == 0; }

std::string joined(const std::vector<std::string>& errs) {
    std::string out = "invalid configuration:";
    for (const auto& e : errs)
        out += "\n  - " + e;
    return out;
}

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& where, std::vector<std::string>& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            errs.push_back("unknown key \"" + it.key() + "\" in " + where);
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& dst,
          std::vector<std::string>& errs) {
    if (!obj.contains(key))
        return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        errs.push_back(std::string("key \"") + key + "\" has the wrong type");
    }
}

} // namespace

RunMode parse_mode(const std::string& name) {
    if (name == "direct")
        return RunMode::direct;
    if (name == "picard")
        return RunMode::picard;
    if (name == "linear")
        return RunMode::linear;
    if (name == "convergence")
        return RunMode::convergence;
    throw ValidationError("unknown mode \"" + name +
                          "\" (expected direct, picard, linear, or convergence)");
}

RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("configuration must be a JSON object");

    RunConfig cfg;
    std::vector<std::string> errs;
    check_keys(j,
               {"mode", "N", "M", "s", "c0", "c1", "cfl", "dt", "dt_max", "t_end",
                "tol", "scenario", "current", "output_dir", "picard", "refine_steps",
                "seed", "max_steps"},
               "top level", errs);

    std::string mode = "direct";
    read(j, "mode", mode, errs);
    try {
        cfg.mode = parse_mode(mode);
    } catch (const ValidationError& e) {
        errs.push_back(e.what());
    }

    read(j, "N", cfg.n, errs);
    read(j, "M", cfg.m, errs);
    read(j, "s", cfg.s, errs);
    read(j, "c0", cfg.c0, errs);
    read(j, "c1", cfg.c1, errs);
    read(j, "cfl", cfg.cfl, errs);
    read(j, "dt", cfg.dt, errs);
    read(j, "dt_max", cfg.dt_max, errs);
    read(j, "t_end", cfg.t_end, errs);
    read(j, "tol", cfg.tol, errs);
    read(j, "output_dir", cfg.output_dir, errs);
    read(j, "refine_steps", cfg.refine_steps, errs);
    read(j, "seed", cfg.seed, errs);
    read(j, "max_steps", cfg.max_steps, errs);

    if (j.contains("scenario")) {
        const auto& sc = j.at("scenario");
        if (sc.is_string()) {
            cfg.scenario.name = sc.get<std::string>();
        } else if (sc.is_object()) {
            check_keys(sc, {"name", "eps", "k1", "k2", "shear"}, "scenario", errs);
            read(sc, "name", cfg.scenario.name, errs);
            read(sc, "eps", cfg.scenario.eps, errs);
            read(sc, "k1", cfg.scenario.k1, errs);
            read(sc, "k2", cfg.scenario.k2, errs);
            read(sc, "shear", cfg.scenario.shear, errs);
        } else {
            errs.push_back("scenario must be a name or an object");
        }
    }
    if (j.contains("current")) {
        const auto& cu = j.at("current");
        if (cu.is_object()) {
            check_keys(cu, {"j1", "j2"}, "current", errs);
            read(cu, "j1", cfg.current.j1, errs);
            read(cu, "j2", cfg.current.j2, errs);
        } else {
            errs.push_back("current must be an object with j1, j2");
        }
    }
    if (j.contains("picard")) {
        const auto& p = j.at("picard");
        if (p.is_object()) {
            check_keys(p,
                       {"T", "samples", "max_iters", "contraction_tol", "delta0",
                        "bisection_max"},
                       "picard", errs);
            read(p, "T", cfg.picard_T, errs);
            read(p, "samples", cfg.picard_samples, errs);
            read(p, "max_iters", cfg.picard_max_iters, errs);
            read(p, "contraction_tol", cfg.contraction_tol, errs);
            read(p, "delta0", cfg.delta0, errs);
            read(p, "bisection_max", cfg.bisection_max, errs);
        } else {
            errs.push_back("picard must be an object");
        }
    }

    if (!power_of_two(cfg.n))
        errs.push_back("N must be a power of two >= 4");
    if (cfg.m < 4)
        errs.push_back("M must be at least 4");
    if (cfg.s < 3)
        errs.push_back("s must be an integer >= 3");
    if (cfg.c0 <= 0.0 || cfg.c0 >= 0.5)
        errs.push_back("c0 must lie in (0, 0.5)");
    if (cfg.c1 <= 0.0)
        errs.push_back("c1 must be positive");
    if (cfg.cfl <= 0.0 || cfg.cfl > 1.0)
        errs.push_back("cfl must lie in (0, 1]");
    if (cfg.dt < 0.0)
        errs.push_back("dt must be nonnegative (0 selects the CFL step)");
    if (cfg.dt_max <= 0.0)
        errs.push_back("dt_max must be positive");
    if (cfg.t_end <= 0.0)
        errs.push_back("t_end must be positive");
    if (cfg.tol <= 0.0)
        errs.push_back("tol must be positive");
    static const std::set<std::string> scenarios{"equilibrium", "perturbed", "sheared",
                                                 "collinear"};
    if (!scenarios.count(cfg.scenario.name))
        errs.push_back("unknown scenario \"" + cfg.scenario.name + "\"");
    if (cfg.picard_T <= 0.0)
        errs.push_back("picard.T must be positive");
    if (cfg.picard_samples < 2)
        errs.push_back("picard.samples must be at least 2");
    if (cfg.picard_max_iters < 1)
        errs.push_back("picard.max_iters must be at least 1");
    if (cfg.contraction_tol <= 0.0)
        errs.push_back("picard.contraction_tol must be positive");
    if (cfg.delta0 <= 0.0)
        errs.push_back("picard.delta0 must be positive");
    if (cfg.refine_steps < 3)
        errs.push_back("refine_steps must be at least 3");

    if (!errs.empty())
        throw ValidationError(joined(errs));
    return cfg;
}

int worker_threads() {
    if (const char* env = std::getenv("MHDSIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<int>(v);
    }
    return 1;
}

} // namespace mhdsim
