#include "mhdsim/io.hpp"

#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

constexpr char kMagic[8] = {'M', 'H', 'D', 'S', 'N', 'A', 'P', '1'};

void put_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& in, std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in)
        throw ParseError("snapshot payload truncated");
}

} // namespace

void write_snapshot(const std::string& path, const PlasmaVacuumState& state) {
    const int n = state.f.grid_size();
    const int m = state.omega_star[0].levels();
    nlohmann::ordered_json header;
    header["format"] = "mhdsim-snapshot";
    header["version"] = 1;
    header["n"] = n;
    header["m"] = m;
    header["scalars"] = {"time", "beta1", "beta2", "gamma1", "gamma2", "c0"};
    header["arrays"] = nlohmann::ordered_json::array();
    auto shape2 = nlohmann::ordered_json::array({n, n});
    auto shape3 = nlohmann::ordered_json::array({m + 1, n, n});
    header["arrays"].push_back({{"name", "f"}, {"shape", shape2}});
    header["arrays"].push_back({{"name", "theta"}, {"shape", shape2}});
    for (int c = 0; c < 3; ++c)
        header["arrays"].push_back({{"name", "omega" + std::to_string(c + 1)},
                                    {"shape", shape3}});
    for (int c = 0; c < 3; ++c)
        header["arrays"].push_back({{"name", "j" + std::to_string(c + 1)},
                                    {"shape", shape3}});
    const std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ParseError("cannot open snapshot for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    const uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    put_doubles(out, {state.time, state.beta[0], state.beta[1], state.gamma[0],
                      state.gamma[1], state.c0});
    put_doubles(out, state.f.values());
    put_doubles(out, state.theta.values());
    for (int c = 0; c < 3; ++c)
        put_doubles(out, state.omega_star[c].values());
    for (int c = 0; c < 3; ++c)
        put_doubles(out, state.j_star[c].values());
    if (!out)
        throw ParseError("snapshot write failed: " + path);
}

PlasmaVacuumState read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open snapshot: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 8, kMagic))
        throw ParseError("not a snapshot file: " + path);
    uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    if (!in)
        throw ParseError("snapshot header truncated");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(htext);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad snapshot header: ") + e.what());
    }
    if (header.value("format", "") != "mhdsim-snapshot")
        throw ParseError("unrecognized snapshot format");
    const int n = header.at("n").get<int>();
    const int m = header.at("m").get<int>();
    if (n < 4 || m < 1)
        throw ParseError("snapshot grid sizes out of range");

    PlasmaVacuumState s;
    std::vector<double> scalars(6);
    get_doubles(in, scalars);
    s.time = scalars[0];
    s.beta = {scalars[1], scalars[2]};
    s.gamma = {scalars[3], scalars[4]};
    s.c0 = scalars[5];
    s.f = InterfaceField(n);
    s.theta = InterfaceField(n);
    s.omega_star = BulkVector(Side::plasma, n, m);
    s.j_star = BulkVector(Side::plasma, n, m);
    get_doubles(in, s.f.values());
    get_doubles(in, s.theta.values());
    for (int c = 0; c < 3; ++c)
        get_doubles(in, s.omega_star[c].values());
    for (int c = 0; c < 3; ++c)
        get_doubles(in, s.j_star[c].values());
    return s;
}

std::string record_json(const DiagnosticsRecord& r) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["lambda_min"] = r.lambda_min;
    j["E_s"] = r.e_s;
    j["calE_s"] = r.cal_e_s;
    j["mean_f_drift"] = r.mean_f_drift;
    j["mean_theta"] = r.mean_theta;
    j["hN"] = r.hn_residual;
    j["hhatN"] = r.hhatn_residual;
    j["pressure_balance"] = r.pressure_balance_residual;
    j["kinematic"] = r.kinematic_residual;
    j["div_omega"] = r.div_omega;
    j["div_j"] = r.div_j;
    return j.dump();
}

} // namespace mhdsim
