#pragma once

#include <string>

#include "mhdsim/diagnostics.hpp"
#include "mhdsim/state.hpp"

namespace mhdsim {

// Snapshot file: magic "MHDSNAP1", uint64 header length, JSON header with
// grid sizes and array layout, then raw little-endian float64 payload.
// Every floating-point value lives in the payload so round-trips are bit-exact.
void write_snapshot(const std::string& path, const PlasmaVacuumState& state);
PlasmaVacuumState read_snapshot(const std::string& path);

// one deterministic JSON line per record
std::string record_json(const DiagnosticsRecord& r);

} // namespace mhdsim
