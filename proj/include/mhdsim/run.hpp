#pragma once

#include "mhdsim/config.hpp"
#include "mhdsim/io.hpp"
#include "mhdsim/iteration.hpp"

namespace mhdsim {

namespace exit_code {
constexpr int ok = 0;
constexpr int stability = 2;
constexpr int gap = 3;
constexpr int no_contraction = 4;
constexpr int solver = 5;
constexpr int config = 6;
} // namespace exit_code

// initial data assembled from a scenario preset
struct InitialData {
    InterfaceField f0;
    BulkVector u0, h0;
    SurfaceCurrent current;
};

InitialData build_scenario(const RunConfig& cfg);

// executes the configured mode, writing diagnostics.jsonl, summary.json,
// snapshot_final.bin (and convergence.csv / contraction.jsonl per mode) into
// cfg.output_dir; returns a process exit code
int run(const RunConfig& cfg);

} // namespace mhdsim
