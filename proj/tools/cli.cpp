#include "cli.hpp"

#include "injurybench/analysis.hpp"
#include "injurybench/engine.hpp"
#include "injurybench/error.hpp"
#include "injurybench/speed.hpp"
#include "injurybench/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace injurybench::cli {

namespace {

using nlohmann::json;

/// Bad input that should end the process with the usage/IO code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    return out;
}

/// Writes to the named file, or to `fallback` when the name is empty.
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    auto out = open_out(path);
    out << text;
}

Window parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("window must look like lo:hi");
    try {
        return Window{std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw UsageError("window must look like lo:hi");
    }
}

Dyadic parse_dyadic(const std::string& text, const char* what) {
    try {
        return Dyadic::parse(text);
    } catch (const std::invalid_argument& ex) {
        throw UsageError(std::string(what) + ": " + ex.what());
    }
}

std::vector<std::uint64_t> parse_numbers(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw UsageError("expected a number, got '" + item + "'");
        }
    }
    return out;
}

/// identity | affine:a,b | step:width,height[,offset] | table:<csv>
ModulusFn parse_modulus(const std::string& spec) {
    if (spec == "identity") return ModulusFn::affine(1, 0);
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    const auto rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (kind == "table") {
        auto in = open_in(rest);
        return read_modulus_csv(in);
    }
    const auto nums = parse_numbers(rest);
    if (kind == "affine" && nums.size() == 2) return ModulusFn::affine(nums[0], nums[1]);
    if (kind == "step" && (nums.size() == 2 || nums.size() == 3))
        return ModulusFn::step(nums[0], nums[1], nums.size() == 3 ? nums[2] : 0);
    throw UsageError("unrecognized modulus '" + spec + "'");
}

ApproxSequence load_sequence(const std::string& path, const std::string& limit) {
    auto in = open_in(path);
    ApproxSequence seq;
    seq.values = read_sequence_csv(in);
    seq.provenance = path;
    if (!limit.empty()) seq.known_limit = parse_dyadic(limit, "--limit");
    return seq;
}

PhiRegistry load_registry(const std::string& path) {
    if (path.empty()) return PhiRegistry(default_suite_config());
    return PhiRegistry(PhiConfig::load(path));
}

Trace load(const std::string& path) {
    auto in = open_in(path);
    return read_trace(in);
}

std::string json_indices(const std::vector<std::size_t>& xs) { return json(xs).dump(); }

// ---------------------------------------------------------------- run

struct RunArgs {
    std::string engine;
    Stage stages = 0;
    std::string phi_config;
    std::string out;
    std::string csv;
    bool timestamp = false;
};

int cmd_run(const RunArgs& args, std::ostream& out) {
    const auto kind = parse_engine_kind(args.engine);
    const auto reg = load_registry(args.phi_config);
    auto trace = run(kind, reg, args.stages);
    if (args.timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
        trace.header.timestamp = buf;
    }
    {
        auto f = open_out(args.out);
        write_trace(f, trace);
    }
    auto csv_path = args.csv;
    if (csv_path.empty()) csv_path = std::filesystem::path(args.out).replace_extension(".csv").string();
    {
        auto f = open_out(csv_path);
        write_sequence_csv(f, trace.x);
    }
    out << "digest " << trace.digest() << '\n'
        << "x_T " << trace.x.back().to_string() << '\n'
        << "trace " << args.out << '\n'
        << "sequence " << csv_path << '\n';
    return kPass;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string trace;
    std::string checks = "all";
    std::string report;
    std::string format = "json";
    std::string window;
    std::size_t threshold = 3;
    std::vector<Index> indices;
};

std::string render_text(const std::vector<Report>& reports, Status total) {
    std::ostringstream s;
    for (const auto& r : reports) {
        s << r.check << ": " << to_string(r.status) << '\n';
        for (const auto& a : r.assumptions) s << "  assumes: " << a << '\n';
        for (const auto& w : r.witnesses) s << "  " << w.dump() << '\n';
    }
    s << "overall: " << to_string(total) << '\n';
    return s.str();
}

int exit_for(Status s) {
    switch (s) {
        case Status::Pass: return kPass;
        case Status::Fail: return kFail;
        case Status::Incomplete: return kIncomplete;
    }
    return kFail;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    std::vector<std::string> names;
    {
        std::stringstream in(args.checks);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item != "all" &&
                std::find(check_names().begin(), check_names().end(), item) == check_names().end())
                throw UsageError("unknown check '" + item + "'");
            names.push_back(item);
        }
    }
    const auto trace = load(args.trace);
    VerifyOptions options;
    if (!args.indices.empty()) options.indices = args.indices;
    options.true_path.threshold = args.threshold;
    if (!args.window.empty()) options.true_path.window = parse_window(args.window);

    const auto reports = run_checks(trace, names, options);
    const auto total = overall(reports);
    std::string text;
    if (args.format == "text") {
        text = render_text(reports, total);
    } else {
        json doc;
        doc["trace_digest"] = trace.digest();
        doc["engine"] = to_string(trace.header.engine);
        doc["stages"] = trace.horizon();
        doc["overall"] = to_string(total);
        doc["reports"] = json::array();
        for (const auto& r : reports) doc["reports"].push_back(r.to_json());
        text = doc.dump(2) + "\n";
    }
    emit(args.report, out, text);
    return exit_for(total);
}

// ---------------------------------------------------------------- truepath

struct TruePathArgs {
    std::string trace;
    std::string window;
    std::size_t threshold = 3;
    std::optional<std::size_t> length;
    std::string format = "json";
};

int cmd_truepath(const TruePathArgs& args, std::ostream& out) {
    const auto trace = load(args.trace);
    std::vector<BinStr> settled;
    settled.reserve(trace.horizon());
    for (const auto& rec : trace.stages) settled.push_back(rec.settled);
    const auto T = trace.horizon();
    const Window window = args.window.empty() ? Window{T / 2, T} : parse_window(args.window);
    if (window.lo >= window.hi || window.hi > T)
        throw UsageError("window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                         ") is outside the horizon " + std::to_string(T));
    const auto est = true_path_estimate(settled, window, args.threshold, args.length);
    const auto& bits = est.path.bits();
    if (args.format == "text") {
        out << "path " << est.path.display() << '\n'
            << "stable " << BinStr(bits.substr(0, est.stable_upto)).display() << " ("
            << est.stable_upto << " of " << bits.size() << " bits)\n"
            << "window " << window.lo << ':' << window.hi << '\n';
    } else {
        json doc{{"path", bits},
                 {"stable_prefix", bits.substr(0, est.stable_upto)},
                 {"stable_upto", est.stable_upto},
                 {"length", bits.size()},
                 {"window", {window.lo, window.hi}},
                 {"threshold", args.threshold}};
        out << doc.dump(2) << '\n';
    }
    return est.stable_upto == bits.size() ? kPass : kIncomplete;
}

// ---------------------------------------------------------------- speed

struct SpeedArgs {
    std::string seq;
    std::string limit;
    std::string rho;
    std::string modulus;
    std::string out;
    std::uint64_t count = 16;
    std::uint64_t budget = std::uint64_t{1} << 20;
};

int cmd_speed_indices(const SpeedArgs& args, std::ostream& out) {
    const auto seq = load_sequence(args.seq, args.limit);
    const auto got = speedup_indices(seq, parse_dyadic(args.rho, "--rho"));
    const bool agree = got.ratio_form == got.prime_form;
    out << json{{"ratio_form", got.ratio_form}, {"prime_form", got.prime_form}, {"agree", agree}}.dump()
        << '\n';
    return agree ? kPass : kFail;
}

int cmd_speed_regain2speed(const SpeedArgs& args, std::ostream& out) {
    const auto seq = load_sequence(args.seq, args.limit);
    const auto y = regain_to_speed(seq);
    {
        std::ostringstream csv;
        write_sequence_csv(csv, y.values);
        emit(args.out, out, csv.str());
    }
    if (!seq.known_limit) return kPass;
    json ratios = json::array();
    bool above = true;
    for (const auto& r : regaining_ratios(seq)) {
        ratios.push_back({{"n", r.n}, {"ratio", r.ratio.get_str()}});
        above = above && r.ratio > mpq_class(1, 4);
    }
    // With --out the sequence went to a file and the ratios own stdout.
    if (!args.out.empty()) out << json{{"regaining_ratios", ratios}, {"above_quarter", above}}.dump() << '\n';
    return above ? kPass : kFail;
}

int cmd_speed_speed2regain(const SpeedArgs& args, std::ostream& out) {
    const auto f = parse_modulus(args.modulus);
    const auto got = speed_to_regain(f, parse_dyadic(args.rho, "--rho"), args.budget);
    std::vector<std::uint64_t> g, h;
    for (std::uint64_t n = 0; n < args.count; ++n) {
        g.push_back(got.g(n));
        h.push_back(got.h(n));
    }
    json doc{{"k", got.k}, {"g", g}, {"h", h}, {"budget_used", got.budget}};
    doc["m"] = got.m ? json(*got.m) : json(nullptr);
    doc["status"] = got.m ? "pass" : "incomplete";
    out << doc.dump() << '\n';
    if (!args.out.empty()) {
        auto f_out = open_out(args.out);
        write_modulus_csv(f_out, got.h, args.count);
    }
    return got.m ? kPass : kIncomplete;
}

int cmd_speed_certify(const SpeedArgs& args, std::ostream& out) {
    const auto seq = load_sequence(args.seq, args.limit);
    out << json_indices(certify_regaining(seq, parse_modulus(args.modulus))) << '\n';
    return kPass;
}

int cmd_speed_gapbound(const SpeedArgs& args, std::ostream& out) {
    const auto seq = load_sequence(args.seq, args.limit);
    const auto got = modulus_to_gapbound(parse_modulus(args.modulus), seq);
    json doc{{"checked", got.checked}};
    doc["violation"] = got.violation ? json(*got.violation) : json(nullptr);
    out << doc.dump() << '\n';
    return got.violation ? kFail : kPass;
}

// ---------------------------------------------------------------- export

struct ExportArgs {
    std::string trace;
    std::string format = "dot";
    std::string out;
};

std::string export_dot(const Trace& trace) {
    std::map<BinStr, std::size_t> settles;
    std::map<BinStr, bool> applied;
    for (const auto& rec : trace.stages) {
        ++settles[rec.settled];
        for (std::size_t n = 0; n <= rec.settled.size(); ++n) applied[rec.settled.prefix(n)] = true;
    }
    auto id = [](const BinStr& s) { return "\"s" + s.bits() + "\""; };
    std::ostringstream s;
    s << "digraph strategies {\n  node [shape=box];\n";
    for (const auto& [sigma, _] : applied) {
        const auto it = settles.find(sigma);
        const auto init = last_initialization(trace, sigma);
        s << "  " << id(sigma) << " [label=\"" << sigma.display() << "\\nsettled "
          << (it == settles.end() ? 0 : it->second) << "\\nlast init "
          << (init ? std::to_string(*init) : std::string("-")) << "\"];\n";
    }
    for (const auto& [sigma, _] : applied)
        if (!sigma.empty())
            s << "  " << id(sigma.prefix(sigma.size() - 1)) << " -> " << id(sigma) << " [label=\""
              << sigma.last() << "\"];\n";
    s << "}\n";
    return s.str();
}

std::string export_jumps(const Trace& trace) {
    std::ostringstream s;
    s << "t,mantissa,exponent,settled,action\n";
    for (const auto& rec : trace.stages) {
        if (rec.jump.is_zero()) continue;
        s << rec.t << ',' << rec.jump.mantissa().get_str() << ',' << rec.jump.exponent() << ','
          << rec.settled.bits() << ',' << to_string(rec.action.kind) << '\n';
    }
    return s.str();
}

int cmd_export(const ExportArgs& args, std::ostream& out) {
    const auto trace = load(args.trace);
    emit(args.out, out, args.format == "dot" ? export_dot(trace) : export_jumps(trace));
    return kPass;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Runs, traces and checks the two priority constructions."};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "run an engine and write its trace");
    run_cmd->add_option("--engine", run_args.engine, "A or B")->required()->check(CLI::IsMember({"A", "B"}));
    run_cmd->add_option("--stages", run_args.stages, "number of stages T")->required()->check(CLI::PositiveNumber);
    run_cmd->add_option("--phi-config", run_args.phi_config, "registry config (JSON); default suite if absent")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run_args.out, "trace output (JSONL)")->required();
    run_cmd->add_option("--csv", run_args.csv, "sequence CSV (default: --out with .csv)");
    run_cmd->add_flag("--timestamp", run_args.timestamp, "record the wall-clock time in the header");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "check a trace");
    verify_cmd->add_option("trace", verify_args.trace)->required();
    verify_cmd->add_option("--checks", verify_args.checks, "comma-separated checker names, or all");
    verify_cmd->add_option("--report", verify_args.report, "write the report here instead of stdout");
    verify_cmd->add_option("--format", verify_args.format)->check(CLI::IsMember({"json", "text"}));
    verify_cmd->add_option("--window", verify_args.window, "true-path window lo:hi");
    verify_cmd->add_option("--threshold", verify_args.threshold)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--index", verify_args.indices, "requirement slots (default: all declared)");

    TruePathArgs tp_args;
    auto* tp_cmd = app.add_subcommand("truepath", "estimate the true path of a trace");
    tp_cmd->add_option("trace", tp_args.trace)->required();
    tp_cmd->add_option("--window", tp_args.window, "lo:hi (default: second half)");
    tp_cmd->add_option("--threshold", tp_args.threshold)->check(CLI::PositiveNumber);
    tp_cmd->add_option("--length", tp_args.length);
    tp_cmd->add_option("--format", tp_args.format)->check(CLI::IsMember({"json", "text"}));

    SpeedArgs speed_args;
    auto* speed_cmd = app.add_subcommand("speed", "transformations between approximation speeds");
    speed_cmd->require_subcommand(1);
    auto add_seq = [&](CLI::App* cmd, bool limit_required) {
        cmd->add_option("--seq", speed_args.seq, "sequence CSV")->required();
        auto* opt = cmd->add_option("--limit", speed_args.limit, "exact limit m/2^k");
        if (limit_required) opt->required();
    };
    auto* indices_cmd = speed_cmd->add_subcommand("indices", "indices sped up by rho");
    add_seq(indices_cmd, true);
    indices_cmd->add_option("--rho", speed_args.rho)->required();
    auto* r2s_cmd = speed_cmd->add_subcommand("regain2speed", "shift by -2^-n");
    add_seq(r2s_cmd, false);
    r2s_cmd->add_option("--out", speed_args.out, "output CSV (stdout if absent)");
    auto* s2r_cmd = speed_cmd->add_subcommand("speed2regain", "derive g, k, h, m from a modulus");
    s2r_cmd->add_option("--modulus", speed_args.modulus, "identity | affine:a,b | step:w,h[,o] | table:<csv>")
        ->required();
    s2r_cmd->add_option("--rho", speed_args.rho)->required();
    s2r_cmd->add_option("--count", speed_args.count, "how many values of g and h to print");
    s2r_cmd->add_option("--budget", speed_args.budget, "search budget for m");
    s2r_cmd->add_option("--out", speed_args.out, "write h as a modulus table");
    auto* certify_cmd = speed_cmd->add_subcommand("certify", "indices with x - x_n <= 2^-h(n)");
    add_seq(certify_cmd, true);
    certify_cmd->add_option("--modulus", speed_args.modulus)->required();
    auto* gap_cmd = speed_cmd->add_subcommand("gapbound", "gap bound derived from a modulus");
    add_seq(gap_cmd, true);
    gap_cmd->add_option("--modulus", speed_args.modulus)->required();

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export", "strategy tree (dot) or jump timeline (csv)");
    export_cmd->add_option("trace", export_args.trace)->required();
    export_cmd->add_option("--format", export_args.format)->check(CLI::IsMember({"dot", "csv"}));
    export_cmd->add_option("--out", export_args.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_args, out);
        if (verify_cmd->parsed()) return cmd_verify(verify_args, out);
        if (tp_cmd->parsed()) return cmd_truepath(tp_args, out);
        if (export_cmd->parsed()) return cmd_export(export_args, out);
        if (indices_cmd->parsed()) return cmd_speed_indices(speed_args, out);
        if (r2s_cmd->parsed()) return cmd_speed_regain2speed(speed_args, out);
        if (s2r_cmd->parsed()) return cmd_speed_speed2regain(speed_args, out);
        if (certify_cmd->parsed()) return cmd_speed_certify(speed_args, out);
        if (gap_cmd->parsed()) return cmd_speed_gapbound(speed_args, out);
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << '\n';
        return kUsage;
    } catch (const TraceCorruption& ex) {
        err << "corrupted trace: " << ex.what() << '\n';
        return kFail;
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace injurybench::cli
