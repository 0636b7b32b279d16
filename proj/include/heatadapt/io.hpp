#pragma once

// File formats: trace.csv, snapshots.csv, manifest.json and the flat
// `key = value` configuration files read by the command-line tool.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "heatadapt/domain.hpp"

namespace heatadapt::io {

inline constexpr std::string_view kTraceHeader = "t,u0,u,zeta,w0,w1,wnorm,obs_err_norm,E,F";
inline constexpr std::string_view kSnapshotHeader = "t,x,w,what";

/// 17 significant digits: enough for a bit-exact round trip of any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::Io, "cannot parse '" + std::string(text) + "' as a number in " + std::string(what));
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// ---------------------------------------------------------------------------
// trace.csv
// ---------------------------------------------------------------------------

inline void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << kTraceHeader << '\n';
    for (const auto& s : trace.samples()) {
        const double row[] = {s.t, s.u0, s.u, s.zeta, s.w0, s.w1, s.wnorm, s.obs_err_norm, s.E, s.F};
        for (std::size_t i = 0; i < std::size(row); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
}

/// Reads the columns of trace.csv back into a Trace (other Sample fields stay 0).
inline Trace read_trace_csv(std::istream& is, const std::string& source = "trace.csv") {
    std::string line;
    if (!std::getline(is, line) || trim(line) != kTraceHeader) {
        throw Error(ErrorCode::Io, source + ": missing or unexpected header");
    }
    Trace trace("from-csv");
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 10) {
            throw Error(ErrorCode::Io, source + ":" + std::to_string(row) + ": expected 10 columns");
        }
        double v[10];
        for (std::size_t i = 0; i < 10; ++i) v[i] = parse_double(trim(cells[i]), source);
        Sample s;
        s.t = v[0];
        s.u0 = v[1];
        s.u = v[2];
        s.zeta = v[3];
        s.w0 = v[4];
        s.w1 = v[5];
        s.wnorm = v[6];
        s.obs_err_norm = v[7];
        s.E = v[8];
        s.F = v[9];
        trace.push(s);
    }
    return trace;
}

/// Long format: one row per (snapshot, node).
inline void write_snapshots_csv(std::ostream& os, const Trace& trace) {
    os << kSnapshotHeader << '\n';
    for (const auto& snap : trace.snapshots()) {
        const Grid& g = snap.w.grid();
        for (std::size_t i = 0; i < g.size(); ++i) {
            os << format_double(snap.t) << ',' << format_double(g.node(i)) << ',' << format_double(snap.w[i]) << ','
               << format_double(snap.what[i]) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

struct PESummary {
    std::string signal;
    bool is_pe = false;
    double tau = 0.0;
    double threshold = 0.0;
    std::vector<double> window_integrals;
};

struct Verdicts {
    bool blew_up = false;
    double blow_up_time = 0.0;
    /// False when the reference violates the uniform derivative bound.
    bool reference_bounded = true;
    std::optional<PESummary> pe;
    std::map<std::string, bool> converged;
    std::map<std::string, double> gaps;
    bool gates_passed = true;
};

struct RunManifest {
    std::string scenario;
    ParamValues params;
    ConfigValues config;
    std::string reference = "zero";
    std::string init = "paper";
    std::string u0 = "exp-decay";
    double zeta0 = 0.0;
    int modes = 16;
    std::string tool_version;
    double wall_clock_seconds = 0.0;
    std::map<std::string, std::string> outputs;
    Verdicts verdicts;
};

inline nlohmann::json to_json(const RunManifest& m) {
    using nlohmann::json;
    json j;
    j["scenario"] = m.scenario;
    j["params"] = {{"q", m.params.q}, {"b", m.params.b}, {"sign_b", m.params.sign_b},
                   {"c0", m.params.c0}, {"c1", m.params.c1}};
    const auto& c = m.config;
    j["config"] = {{"dx", c.dx},
                   {"dt", c.dt},
                   {"t_final", c.t_final},
                   {"servo_truncation", c.servo_truncation},
                   {"pe_tau", c.pe_tau},
                   {"pe_threshold", c.pe_threshold},
                   {"pe_windows", c.pe_windows},
                   {"sample_stride", c.sample_stride},
                   {"snapshot_stride", c.snapshot_stride}};
    j["reference"] = m.reference;
    j["init"] = m.init;
    j["u0"] = m.u0;
    j["zeta0"] = m.zeta0;
    j["modes"] = m.modes;
    j["tool_version"] = m.tool_version;
    j["wall_clock_seconds"] = m.wall_clock_seconds;
    j["outputs"] = m.outputs;
    json v;
    v["blew_up"] = m.verdicts.blew_up;
    v["blow_up_time"] = m.verdicts.blow_up_time;
    v["reference_bounded"] = m.verdicts.reference_bounded;
    v["converged"] = m.verdicts.converged;
    v["gaps"] = m.verdicts.gaps;
    v["gates_passed"] = m.verdicts.gates_passed;
    if (m.verdicts.pe) {
        const auto& pe = *m.verdicts.pe;
        v["pe"] = {{"signal", pe.signal},
                   {"is_pe", pe.is_pe},
                   {"tau", pe.tau},
                   {"threshold", pe.threshold},
                   {"window_integrals", pe.window_integrals}};
    } else {
        v["pe"] = nullptr;
    }
    j["verdicts"] = v;
    return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.scenario = j.at("scenario").get<std::string>();
        const auto& p = j.at("params");
        m.params = {p.at("q").get<double>(), p.at("b").get<double>(), p.at("sign_b").get<int>(),
                    p.at("c0").get<double>(), p.at("c1").get<double>()};
        const auto& c = j.at("config");
        m.config.dx = c.at("dx").get<double>();
        m.config.dt = c.at("dt").get<double>();
        m.config.t_final = c.at("t_final").get<double>();
        m.config.servo_truncation = c.at("servo_truncation").get<int>();
        m.config.pe_tau = c.at("pe_tau").get<double>();
        m.config.pe_threshold = c.at("pe_threshold").get<double>();
        m.config.pe_windows = c.at("pe_windows").get<int>();
        m.config.sample_stride = c.at("sample_stride").get<long long>();
        m.config.snapshot_stride = c.at("snapshot_stride").get<long long>();
        m.reference = j.at("reference").get<std::string>();
        m.init = j.at("init").get<std::string>();
        m.u0 = j.at("u0").get<std::string>();
        m.zeta0 = j.at("zeta0").get<double>();
        m.modes = j.at("modes").get<int>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        const auto& v = j.at("verdicts");
        m.verdicts.blew_up = v.at("blew_up").get<bool>();
        m.verdicts.blow_up_time = v.at("blow_up_time").get<double>();
        m.verdicts.reference_bounded = v.at("reference_bounded").get<bool>();
        m.verdicts.converged = v.at("converged").get<std::map<std::string, bool>>();
        m.verdicts.gaps = v.at("gaps").get<std::map<std::string, double>>();
        m.verdicts.gates_passed = v.at("gates_passed").get<bool>();
        if (!v.at("pe").is_null()) {
            const auto& pe = v.at("pe");
            m.verdicts.pe = PESummary{pe.at("signal").get<std::string>(), pe.at("is_pe").get<bool>(),
                                      pe.at("tau").get<double>(), pe.at("threshold").get<double>(),
                                      pe.at("window_integrals").get<std::vector<double>>()};
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed manifest: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

struct EmittedPaths {
    std::filesystem::path trace;
    std::optional<std::filesystem::path> snapshots;
    std::filesystem::path manifest;
};

namespace detail {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
    writer(os);
    os.flush();
    if (!os) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

}  // namespace detail

/// Writes trace.csv, snapshots.csv (only when the trace holds snapshots) and
/// manifest.json into `out_dir`, creating it if needed. The manifest's output
/// map is filled in before it is written.
inline EmittedPaths emit_trace(const Trace& trace, RunManifest manifest, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, out_dir.string() + ": " + ec.message());

    EmittedPaths paths;
    paths.trace = out_dir / "trace.csv";
    paths.manifest = out_dir / "manifest.json";
    detail::write_file(paths.trace, [&](std::ostream& os) { write_trace_csv(os, trace); });
    manifest.outputs["trace"] = paths.trace.string();
    if (!trace.snapshots().empty()) {
        paths.snapshots = out_dir / "snapshots.csv";
        detail::write_file(*paths.snapshots, [&](std::ostream& os) { write_snapshots_csv(os, trace); });
        manifest.outputs["snapshots"] = paths.snapshots->string();
    } else {
        std::filesystem::remove(out_dir / "snapshots.csv", ec);
    }
    manifest.outputs["manifest"] = paths.manifest.string();
    detail::write_file(paths.manifest, [&](std::ostream& os) { os << to_json(manifest).dump(2) << '\n'; });
    return paths;
}

// ---------------------------------------------------------------------------
// key = value configuration files
// ---------------------------------------------------------------------------

/// One `key = value` per line; blank lines and lines starting with '#' are
/// skipped. Keys are long flag names without the leading dashes.
inline std::map<std::string, std::string> parse_key_values(std::istream& is, const std::string& source = "config") {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::Usage, source + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto key = std::string(trim(text.substr(0, eq)));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw Error(ErrorCode::Usage, source + ":" + std::to_string(lineno) + ": empty key");
        out[key] = std::string(trim(text.substr(eq + 1)));
    }
    return out;
}

inline std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, path.string() + ": cannot open config file");
    return parse_key_values(is, path.string());
}

}  // namespace heatadapt::io
