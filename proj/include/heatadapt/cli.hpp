#pragma once

// Command-line front end: `simulate`, `analyze` and `sweep`.
//
// Exit codes: 0 success, 1 I/O or other runtime failure, 2 configuration
// rejected (CFL violation and every other validation error), 3 blow-up,
// 4 requested convergence gate failed, 64 usage error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatadapt/analysis.hpp"
#include "heatadapt/domain.hpp"
#include "heatadapt/io.hpp"
#include "heatadapt/scenarios.hpp"

namespace heatadapt::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigRejected = 2,
    kExitBlowUp = 3,
    kExitNotConverged = 4,
    kExitUsage = 64,
};

enum class Command { simulate, analyze, sweep };

/// Everything a command needs, fully typed and with defaults resolved.
struct Request {
    Command command = Command::simulate;
    std::string scenario = "stabilize";
    ParamValues params;
    ConfigValues config;
    std::string reference_text = "zero";
    std::string init = "paper";
    std::string u0 = "exp-decay";
    double zeta0 = 0.0;
    int modes = 16;
    std::filesystem::path out_dir;
    bool require_converged = false;
    double settle = 1.0;
    double gap_tolerance = 1e-3;
    // analyze
    std::filesystem::path trace_path;
    std::string column = "u0";
    // sweep
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    int jobs = 1;
    /// Merged raw options (config file overlaid by explicit flags).
    std::map<std::string, std::string> raw;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"open-loop", "observer",     "stabilize",
                                                   "track",     "error-system", "galerkin"};
    return names;
}

namespace detail {

inline Error usage(const std::string& flag, const std::string& msg) {
    return Error(ErrorCode::Usage, "--" + flag + ": " + msg);
}

inline double to_double(const std::string& flag, const std::string& text) {
    auto t = io::trim(text);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    try {
        return io::parse_double(t, flag);
    } catch (const Error&) {
        throw usage(flag, "expected a number, got '" + text + "'");
    }
}

inline long long to_int(const std::string& flag, const std::string& text) {
    const double v = to_double(flag, text);
    if (v != std::floor(v) || std::abs(v) > 1e15) throw usage(flag, "expected an integer, got '" + text + "'");
    return static_cast<long long>(v);
}

inline bool to_bool(const std::string& flag, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text.empty()) return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw usage(flag, "expected true or false, got '" + text + "'");
}

inline std::pair<double, double> two_numbers(const std::string& flag, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw usage(flag, "expected A,W in '" + text + "'");
    return {to_double(flag, text.substr(0, comma)), to_double(flag, text.substr(comma + 1))};
}

}  // namespace detail

/// `zero`, `const:R` or `sin:A,W` (r = A sin(W t)).
inline ReferenceSignal parse_reference(const std::string& text) {
    if (text == "zero") return ReferenceSignal::zero();
    if (text.rfind("const:", 0) == 0) return ReferenceSignal::constant(detail::to_double("ref", text.substr(6)));
    if (text.rfind("sin:", 0) == 0) {
        const auto [a, w] = detail::two_numbers("ref", text.substr(4));
        if (w < 0.0) throw detail::usage("ref", "frequency must be >= 0");
        return ReferenceSignal::sinusoid(a, w);
    }
    throw detail::usage("ref", "expected zero, const:R or sin:A,W, got '" + text + "'");
}

/// `zero`, `const:C` or `exp-decay` (u0 = e^{-t}).
inline scenarios::Signal parse_u0(const std::string& text) {
    if (text == "zero") return [](double) { return 0.0; };
    if (text == "exp-decay") return [](double t) { return std::exp(-t); };
    if (text.rfind("const:", 0) == 0) {
        const double c = detail::to_double("u0", text.substr(6));
        return [c](double) { return c; };
    }
    throw detail::usage("u0", "expected zero, const:C or exp-decay, got '" + text + "'");
}

/// `paper` (w = q x - 1), `zero`, or `file:PATH` with one value per node per
/// line (either `w` or `x,w`).
inline GridFunction parse_initial_state(const std::string& text, const Grid& grid, double q) {
    if (text == "paper") return scenarios::paper_initial_state(grid, q);
    if (text == "zero") return GridFunction::zeros(grid);
    if (text.rfind("file:", 0) == 0) {
        const std::filesystem::path path = text.substr(5);
        std::ifstream is(path);
        if (!is) throw Error(ErrorCode::Io, path.string() + ": cannot open initial state");
        std::vector<double> values;
        std::string line;
        while (std::getline(is, line)) {
            const auto t = io::trim(line);
            if (t.empty() || t.front() == '#' || std::isalpha(static_cast<unsigned char>(t.front()))) continue;
            const auto cells = io::split(t, ',');
            values.push_back(io::parse_double(io::trim(cells.back()), path.string()));
        }
        if (values.size() != grid.size()) {
            throw Error(ErrorCode::GridMismatch, path.string() + ": " + std::to_string(values.size()) +
                                                     " values for a grid of " + std::to_string(grid.size()) +
                                                     " nodes");
        }
        return GridFunction(grid, std::move(values));
    }
    throw detail::usage("init", "expected paper, zero or file:PATH, got '" + text + "'");
}

/// Converts merged raw options into a typed request. Unknown scenario names and
/// malformed values raise Usage errors naming the flag.
inline Request resolve(Command command, const std::map<std::string, std::string>& raw) {
    using namespace detail;
    Request r;
    r.command = command;
    r.raw = raw;
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = raw.find(k);
        if (it == raw.end()) return std::nullopt;
        return it->second;
    };

    if (auto v = get("scenario")) {
        if (std::find(scenario_names().begin(), scenario_names().end(), *v) == scenario_names().end()) {
            throw usage("scenario", "unknown scenario '" + *v + "'");
        }
        r.scenario = *v;
    }
    if (auto v = get("q")) r.params.q = to_double("q", *v);
    if (auto v = get("b")) r.params.b = to_double("b", *v);
    r.params.sign_b = r.params.b > 0.0 ? 1 : -1;
    if (auto v = get("sign-b")) {
        const auto s = to_int("sign-b", *v);
        if (s != 1 && s != -1) throw usage("sign-b", "expected +1 or -1");
        r.params.sign_b = static_cast<int>(s);
    }
    if (auto v = get("c0")) r.params.c0 = to_double("c0", *v);
    if (auto v = get("c1")) r.params.c1 = to_double("c1", *v);
    if (auto v = get("dx")) r.config.dx = to_double("dx", *v);
    if (auto v = get("dt")) r.config.dt = to_double("dt", *v);
    r.config.t_final = r.scenario == "track" ? 10.0 : 5.0;
    if (auto v = get("t-final")) r.config.t_final = to_double("t-final", *v);
    if (auto v = get("servo-j")) r.config.servo_truncation = static_cast<int>(to_int("servo-j", *v));
    r.config.pe_tau = std::min(1.0, r.config.t_final);
    if (auto v = get("pe-tau")) r.config.pe_tau = to_double("pe-tau", *v);
    r.config.pe_threshold = 1e-3 * r.config.pe_tau;
    if (auto v = get("pe-threshold")) r.config.pe_threshold = to_double("pe-threshold", *v);
    if (auto v = get("pe-windows")) r.config.pe_windows = static_cast<int>(to_int("pe-windows", *v));
    if (auto v = get("sample-stride")) r.config.sample_stride = to_int("sample-stride", *v);
    if (auto v = get("snapshot-stride")) r.config.snapshot_stride = to_int("snapshot-stride", *v);

    r.reference_text = r.scenario == "track" ? "const:3" : "zero";
    if (auto v = get("ref")) r.reference_text = *v;
    const auto ref = parse_reference(r.reference_text);
    if (ref.kind() == ReferenceSignal::Kind::constant) {
        // A constant reference needs no derivative terms.
        r.config.servo_truncation = get("servo-j") ? r.config.servo_truncation : 0;
    }
    r.reference_text = ref.describe();

    if (auto v = get("zeta0")) r.zeta0 = to_double("zeta0", *v);
    if (auto v = get("init")) r.init = *v;
    if (auto v = get("u0")) r.u0 = *v;
    (void)parse_u0(r.u0);
    if (r.init != "paper" && r.init != "zero" && r.init.rfind("file:", 0) != 0) {
        throw usage("init", "expected paper, zero or file:PATH, got '" + r.init + "'");
    }
    if (auto v = get("modes")) {
        const auto m = to_int("modes", *v);
        if (m < 1) throw usage("modes", "need at least one mode");
        r.modes = static_cast<int>(m);
    }
    if (auto v = get("out")) {
        r.out_dir = *v;
    } else if (const char* env = std::getenv("HEATADAPT_OUT"); env && *env) {
        r.out_dir = env;
    } else {
        r.out_dir = "heatadapt-out";
    }
    if (auto v = get("require-converged")) r.require_converged = to_bool("require-converged", *v);
    if (auto v = get("settle")) r.settle = to_double("settle", *v);
    if (auto v = get("gap-tol")) r.gap_tolerance = to_double("gap-tol", *v);
    if (auto v = get("trace")) r.trace_path = *v;
    if (r.trace_path.empty()) r.trace_path = r.out_dir / "trace.csv";
    if (auto v = get("column")) r.column = *v;
    if (auto v = get("param")) r.sweep_param = *v;
    if (auto v = get("values")) {
        for (auto part : io::split(*v, ',')) r.sweep_values.emplace_back(io::trim(part));
    }
    if (auto v = get("jobs")) {
        const auto j = to_int("jobs", *v);
        if (j < 1) throw usage("jobs", "need at least one job");
        r.jobs = static_cast<int>(j);
    }

    if (command == Command::sweep) {
        if (r.sweep_param.empty()) throw usage("param", "sweep needs --param");
        if (r.sweep_values.empty()) throw usage("values", "sweep needs --values");
        static const std::vector<std::string> sweepable = {"q", "b", "c0", "c1", "dx", "dt", "t-final",
                                                           "zeta0", "ref", "u0", "modes", "init"};
        if (std::find(sweepable.begin(), sweepable.end(), r.sweep_param) == sweepable.end()) {
            throw usage("param", "cannot sweep '" + r.sweep_param + "'");
        }
    }
    if (command != Command::analyze) {
        if (auto f = validate_config(r.params, r.config)) throw Error(f->code, f->field + ": " + f->message);
    }
    return r;
}

struct ParsedArgs {
    Command command = Command::simulate;
    Request request;
};

/// Parses argv (without the program name). `--config FILE` supplies defaults
/// that explicit flags override.
/// Thrown by parse_args for --help; carries the rendered help text.
struct HelpRequested {
    std::string text;
};

inline ParsedArgs parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Adaptive boundary control of an unstable heat equation", "heatadapt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    static const std::vector<std::pair<std::string, std::string>> value_flags = {
        {"scenario", "open-loop|observer|stabilize|track|error-system|galerkin"},
        {"q", "convection gain"},
        {"b", "true control coefficient"},
        {"sign-b", "sign of b known to the estimator (+1/-1)"},
        {"c0", "controller gain"},
        {"c1", "observer injection gain"},
        {"dx", "space step"},
        {"dt", "time step"},
        {"t-final", "horizon"},
        {"ref", "reference: zero|const:R|sin:A,W"},
        {"zeta0", "initial estimate of 1/b"},
        {"init", "initial plant state: paper|zero|file:PATH"},
        {"u0", "external u0 for observer/error-system/galerkin: zero|const:C|exp-decay"},
        {"pe-tau", "persistent-excitation window"},
        {"pe-threshold", "persistent-excitation threshold"},
        {"pe-windows", "number of trailing PE windows"},
        {"modes", "Galerkin mode count"},
        {"servo-j", "servo series truncation"},
        {"sample-stride", "steps between trace rows"},
        {"snapshot-stride", "steps between field snapshots (0 = none)"},
        {"settle", "settle window for convergence diagnostics"},
        {"gap-tol", "Cauchy-gap tolerance for convergence diagnostics"},
        {"out", "output directory (default $HEATADAPT_OUT)"},
        {"config", "key = value file; explicit flags win"},
        {"trace", "analyze: trace.csv to read"},
        {"column", "analyze: column tested for persistent excitation"},
        {"param", "sweep: flag to vary"},
        {"values", "sweep: comma-separated values"},
        {"jobs", "sweep: concurrent runs"},
    };

    struct Bound {
        std::string name;
        CLI::Option* option;
        std::string value;
    };
    const std::pair<Command, std::string> commands[] = {
        {Command::simulate, "simulate"}, {Command::analyze, "analyze"}, {Command::sweep, "sweep"}};
    std::map<std::string, CLI::App*> subs;
    std::map<std::string, std::vector<std::unique_ptr<Bound>>> bound;
    std::map<std::string, CLI::Option*> converged_flags;
    for (const auto& [cmd, name] : commands) {
        auto* sub = app.add_subcommand(name, name == "simulate" ? "run one scenario"
                                             : name == "analyze" ? "re-analyze a trace.csv"
                                                                 : "run a parameter sweep");
        subs[name] = sub;
        for (const auto& [flag, help] : value_flags) {
            auto b = std::make_unique<Bound>();
            b->name = flag;
            b->option = sub->add_option("--" + flag, b->value, help);
            bound[name].push_back(std::move(b));
        }
        converged_flags[name] = sub->add_flag("--require-converged", "exit 4 unless the run settles");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream text, ignored;
        app.exit(e, text, ignored);
        throw HelpRequested{text.str()};
    } catch (const CLI::CallForVersion&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::Usage, e.what());
    }

    ParsedArgs parsed;
    for (const auto& [cmd, name] : commands) {
        if (!subs[name]->parsed()) continue;
        parsed.command = cmd;
        std::map<std::string, std::string> merged;
        for (const auto& b : bound[name]) {
            if (b->name == "config" && b->option->count() > 0) merged = io::read_key_value_file(b->value);
        }
        for (const auto& b : bound[name]) {
            if (b->option->count() > 0 && b->name != "config") merged[b->name] = b->value;
        }
        if (converged_flags[name]->count() > 0) merged["require-converged"] = "true";
        for (const auto& [k, v] : merged) {
            const bool known = k == "require-converged" ||
                               std::any_of(value_flags.begin(), value_flags.end(),
                                           [&](const auto& f) { return f.first == k; });
            if (!known) throw Error(ErrorCode::Usage, "unknown configuration key '" + k + "'");
        }
        parsed.request = resolve(cmd, merged);
    }
    return parsed;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunOutcome {
    Trace trace;
    io::RunManifest manifest;
    int exit_code = kExitOk;
};

/// Runs the scenario of `r` and computes verdicts; nothing is written.
inline RunOutcome run(const Request& r) {
    const auto started = std::chrono::steady_clock::now();
    const Params p = Params::make(r.params);
    const SimConfig cfg = SimConfig::make(r.config);
    const Grid& grid = cfg.grid();
    const ReferenceSignal ref = parse_reference(r.reference_text);
    const GridFunction w0 = parse_initial_state(r.init, grid, p.q());
    const GridFunction zero = GridFunction::zeros(grid);

    RunOutcome out;
    const std::string& s = r.scenario;
    if (s == "open-loop") {
        out.trace = scenarios::run_open_loop(p, cfg, w0);
    } else if (s == "observer") {
        out.trace = scenarios::run_observer(p, cfg, w0, zero, r.zeta0, parse_u0(r.u0));
    } else if (s == "stabilize") {
        out.trace = scenarios::run_stabilization(p, cfg, w0, zero, r.zeta0);
    } else if (s == "track") {
        out.trace = scenarios::run_tracking(p, cfg, w0, zero, r.zeta0, ref);
    } else if (s == "error-system") {
        out.trace = scenarios::run_error_system(p, cfg, w0, 1.0 / p.b() - r.zeta0, parse_u0(r.u0));
    } else if (s == "galerkin") {
        out.trace = analysis::galerkin_error_system(r.modes, p, parse_u0(r.u0), w0, 1.0 / p.b() - r.zeta0,
                                                    cfg.t_final(), cfg.dt(), cfg.sample_stride());
    } else {
        throw detail::usage("scenario", "unknown scenario '" + s + "'");
    }

    auto& m = out.manifest;
    m.scenario = s;
    m.params = r.params;
    m.config = r.config;
    m.reference = r.reference_text;
    m.init = r.init;
    m.u0 = r.u0;
    m.zeta0 = r.zeta0;
    m.modes = r.modes;
    m.tool_version = kVersion;

    auto& v = m.verdicts;
    v.blew_up = out.trace.blew_up();
    v.blow_up_time = out.trace.blow_up_time();
    v.reference_bounded = s != "track" || ref.uniformly_bounded();

    const auto& samples = out.trace.samples();
    const double duration = samples.back().t - samples.front().t;
    if (s != "open-loop" && duration >= cfg.pe_windows() * cfg.pe_tau() * (1.0 - 1e-12)) {
        const bool servo = s == "track";
        const auto verdict = analysis::pe_check(out.trace, servo ? &Sample::vx1 : &Sample::u0, cfg.pe_tau(),
                                                cfg.pe_threshold(), cfg.pe_windows());
        v.pe = io::PESummary{servo ? "vx1" : "u0", verdict.is_pe, verdict.tau, verdict.threshold,
                             verdict.window_integrals};
    }
    bool converged = false;
    if (!v.blew_up && duration >= 2.0 * r.settle * (1.0 - 1e-12)) {
        const auto lim = analysis::limit_diagnostics(out.trace, r.settle, r.gap_tolerance);
        for (const auto& qg : lim.quantities) {
            v.converged[qg.name] = qg.converged;
            v.gaps[qg.name] = qg.gap;
        }
        converged = lim.all_converged();
    }
    v.gates_passed = !v.blew_up && (!r.require_converged || converged);
    out.exit_code = v.blew_up ? kExitBlowUp : (v.gates_passed ? kExitOk : kExitNotConverged);

    m.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

inline int simulate(const Request& r, std::ostream& out) {
    auto outcome = run(r);
    const auto paths = io::emit_trace(outcome.trace, outcome.manifest, r.out_dir);
    const auto& last = outcome.trace.back();
    out << r.scenario << ": t=" << io::format_double(last.t) << " wnorm=" << io::format_double(last.wnorm)
        << " zeta=" << io::format_double(last.zeta) << (outcome.trace.blew_up() ? " BLOW-UP" : "")
        << " -> " << paths.trace.string() << '\n';
    return outcome.exit_code;
}

inline int analyze(const Request& r, std::ostream& out) {
    std::ifstream is(r.trace_path);
    if (!is) throw Error(ErrorCode::Io, r.trace_path.string() + ": cannot open trace");
    const Trace trace = io::read_trace_csv(is, r.trace_path.string());

    static const std::map<std::string, double Sample::*> columns = {
        {"u0", &Sample::u0}, {"u", &Sample::u},   {"zeta", &Sample::zeta},   {"w0", &Sample::w0},
        {"w1", &Sample::w1}, {"wnorm", &Sample::wnorm}, {"obs_err_norm", &Sample::obs_err_norm}};
    const auto col = columns.find(r.column);
    if (col == columns.end()) throw detail::usage("column", "no trace column named '" + r.column + "'");

    nlohmann::json j;
    j["trace"] = r.trace_path.string();
    j["samples"] = trace.samples().size();
    const auto pe = analysis::pe_check(trace, col->second, r.config.pe_tau, r.config.pe_threshold,
                                       r.config.pe_windows);
    j["pe"] = {{"signal", r.column},
               {"is_pe", pe.is_pe},
               {"tau", pe.tau},
               {"threshold", pe.threshold},
               {"window_integrals", pe.window_integrals}};
    const auto lim = analysis::limit_diagnostics(trace, r.settle, r.gap_tolerance);
    for (const auto& q : lim.quantities) {
        j["limits"][q.name] = {{"terminal", q.terminal}, {"gap", q.gap}, {"converged", q.converged}};
    }
    j["all_converged"] = lim.all_converged();
    const std::string text = j.dump(2);
    out << text << '\n';
    const auto dest = r.trace_path.parent_path() / "analysis.json";
    std::ofstream os(dest, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Io, dest.string() + ": cannot open for writing");
    os << text << '\n';
    return r.require_converged && !lim.all_converged() ? kExitNotConverged : kExitOk;
}

inline int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::Usage: return kExitUsage;
        case ErrorCode::CflViolation:
        case ErrorCode::NonPositiveGain:
        case ErrorCode::ZeroCoefficient:
        case ErrorCode::SignMismatch:
        case ErrorCode::InvalidGrid:
        case ErrorCode::InvalidConfig:
        case ErrorCode::UnresolvableMode:
        case ErrorCode::TruncationInsufficient: return kExitConfigRejected;
        default: return kExitFailure;
    }
}

/// Each value runs in <out>/<param>=<value>; runs are independent and may
/// execute concurrently.
inline int sweep(const Request& base, std::ostream& out) {
    struct Item {
        std::string value;
        std::filesystem::path dir;
        int code = kExitOk;
        std::string error;
    };
    std::vector<Item> items;
    for (const auto& value : base.sweep_values) {
        items.push_back({value, base.out_dir / (base.sweep_param + "=" + value), kExitOk, {}});
    }
    auto one = [&base](Item& item) {
        try {
            auto raw = base.raw;
            raw[base.sweep_param] = item.value;
            raw["out"] = item.dir.string();
            const Request r = resolve(Command::simulate, raw);
            auto outcome = run(r);
            io::emit_trace(outcome.trace, outcome.manifest, r.out_dir);
            item.code = outcome.exit_code;
        } catch (const Error& e) {
            item.code = exit_code_for(e);
            item.error = e.what();
        }
    };
    const std::size_t jobs = static_cast<std::size_t>(std::max(1, base.jobs));
    for (std::size_t start = 0; start < items.size(); start += jobs) {
        std::vector<std::future<void>> running;
        for (std::size_t i = start; i < std::min(items.size(), start + jobs); ++i) {
            running.push_back(std::async(std::launch::async, one, std::ref(items[i])));
        }
        for (auto& f : running) f.get();
    }

    nlohmann::json summary = nlohmann::json::array();
    int worst = kExitOk;
    for (const auto& item : items) {
        summary.push_back({{"value", item.value}, {"dir", item.dir.string()}, {"exit_code", item.code},
                           {"error", item.error}});
        worst = std::max(worst, item.code);
        out << base.sweep_param << '=' << item.value << " -> exit " << item.code
            << (item.error.empty() ? "" : " (" + item.error + ")") << '\n';
    }
    std::filesystem::create_directories(base.out_dir);
    std::ofstream os(base.out_dir / "sweep.json", std::ios::binary | std::ios::trunc);
    os << summary.dump(2) << '\n';
    return worst;
}

inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto parsed = parse_args(args);
        switch (parsed.command) {
            case Command::simulate: return simulate(parsed.request, out);
            case Command::analyze: return analyze(parsed.request, out);
            case Command::sweep: return sweep(parsed.request, out);
        }
        return kExitFailure;
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "heatadapt: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "heatadapt: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace heatadapt::cli
