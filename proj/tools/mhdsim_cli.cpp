#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mhdsim/errors.hpp"
#include "mhdsim/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"plasma-vacuum interface simulator"};
    std::string config_path, mode_override, output_override;
    long max_steps = -2; // -2 means "not given" (-1 is a valid value: no cap)
    unsigned seed = 0;
    bool seed_given = false;

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--mode", mode_override,
                   "override mode: direct, picard, linear, convergence");
    app.add_option("--output", output_override, "override output directory");
    app.add_option("--seed", seed, "seed for randomized suites")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--max-steps", max_steps, "cap on time steps (-1 for none)");
    CLI11_PARSE(app, argc, argv);

    try {
        mhdsim::RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot open config file: " << config_path << "\n";
                return mhdsim::exit_code::config;
            }
            std::ostringstream text;
            text << in.rdbuf();
            cfg = mhdsim::parse_config(text.str());
        }
        if (!mode_override.empty())
            cfg.mode = mhdsim::parse_mode(mode_override);
        if (!output_override.empty())
            cfg.output_dir = output_override;
        if (max_steps != -2)
            cfg.max_steps = max_steps;
        if (seed_given)
            cfg.seed = seed;
        return mhdsim::run(cfg);
    } catch (const mhdsim::ParseError& e) {
        std::cerr << e.what() << "\n";
        return mhdsim::exit_code::config;
    } catch (const mhdsim::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return mhdsim::exit_code::config;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return mhdsim::exit_code::solver;
    }
}
