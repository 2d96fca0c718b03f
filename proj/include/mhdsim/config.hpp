#pragma once

#include <string>

namespace mhdsim {

enum class RunMode { direct, picard, linear, convergence };

// initial-data presets; "custom" loads a snapshot from scenario.path
struct ScenarioSpec {
    std::string name = "equilibrium"; // equilibrium | perturbed | sheared | collinear
    double eps = 1e-4;                // perturbation amplitude
    int k1 = 1, k2 = 0;               // perturbation wavevector
    double shear = 0.1;               // shear profile amplitude
};

struct CurrentSpec {
    double j1 = 1.0, j2 = 0.0; // constant imposed wall current
};

struct RunConfig {
    RunMode mode = RunMode::direct;
    int n = 32, m = 16, s = 3;
    double c0 = 0.05, c1 = 0.01;
    double cfl = 0.4, dt = 0.0, dt_max = 0.1, t_end = 1.0;
    double tol = 1e-10;
    ScenarioSpec scenario;
    CurrentSpec current;
    std::string output_dir = ".";
    // picard mode
    double picard_T = 0.2;
    int picard_samples = 8;
    int picard_max_iters = 20;
    double contraction_tol = 1e-9;
    double delta0 = 0.25;
    int bisection_max = 8;
    // convergence mode: coarse level is (n, m, cfl); fine level doubles n, m
    int refine_steps = 4; // direct steps per level before measuring residuals
    unsigned seed = 0;
    long max_steps = -1; // cap on direct steps, -1 for none
};

// parses and validates a JSON document; collects every violation into the
// error message
RunConfig parse_config(const std::string& text);

RunMode parse_mode(const std::string& name); // throws ValidationError

// worker-thread cap from MHDSIM_THREADS (>= 1)
int worker_threads();

} // namespace mhdsim
