#include "qeraser/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qeraser/report.hpp"

namespace qeraser {
namespace {

namespace fs = std::filesystem;

struct Source {
    std::string file;
    std::string builtin;
};

struct Loaded {
    ScenarioDoc doc;
    ScenarioResolver resolve;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_source_options(CLI::App* cmd, Source& src) {
    cmd->add_option("file", src.file, "Scenario file");
    cmd->add_option("--builtin", src.builtin, "Built-in scenario name");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Named references resolve to builtins first, then to NAME.scn beside the file.
ScenarioResolver file_resolver(const fs::path& dir) {
    return [dir](const std::string& name) {
        for (const auto& n : builtin_names())
            if (n == name) return builtin_scenario(name);
        const fs::path candidate = dir / (name + ".scn");
        std::ifstream in(candidate, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::UnknownScenario,
                        "scenario '" + name + "' is neither a builtin nor " + candidate.string());
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str());
    };
}

Loaded load(const Source& src) {
    if (src.file.empty() == src.builtin.empty())
        throw UsageError("give exactly one of a scenario file or --builtin NAME");
    if (!src.builtin.empty()) return {builtin_scenario(src.builtin), builtin_resolver()};
    const std::string text = read_file(src.file);
    try {
        return {parse_scenario(text), file_resolver(fs::path(src.file).parent_path())};
    } catch (const ParseError& e) {
        throw UsageError(src.file + ": " + e.what());
    }
}

RecordPredicate predicate_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_predicate(text);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

void emit(const ScenarioReport& report, bool as_json, std::ostream& out) {
    out << (as_json ? format_json(report) : format_text(report));
}

struct AuditFlags {
    std::string kind;
    std::string other;
    std::string wing;
    std::string record;
    std::string event;
    std::string projector;
    std::optional<double> expect;
};

std::vector<AuditDirective> select_audits(const ScenarioDoc& doc, const AuditFlags& f) {
    const auto kind = audit_kind_from_string(f.kind);
    if (!kind) {
        throw UsageError("unknown audit kind '" + f.kind +
                         "'; expected no-signaling, cut-invariance, consistency, "
                         "filter-equivalence or retro");
    }
    const bool custom = !f.other.empty() || !f.wing.empty() || !f.record.empty() ||
                        !f.event.empty() || !f.projector.empty();
    if (!custom) {
        std::vector<AuditDirective> out;
        for (const auto& d : doc.audits)
            if (d.kind == *kind) out.push_back(d);
        if (out.empty()) {
            throw UsageError("scenario declares no " + f.kind +
                             " audit; describe one with the audit flags");
        }
        if (f.expect)
            for (auto& d : out) d.expect = f.expect;
        return out;
    }
    AuditDirective d;
    d.kind = *kind;
    d.other = f.other;
    d.wing = f.wing;
    d.record = f.record;
    d.expect = f.expect;
    if (!f.event.empty()) d.event = predicate_flag("--event", f.event);
    if (!f.projector.empty()) {
        try {
            d.projector = parse_ket(f.projector);
        } catch (const ParseError& e) {
            throw UsageError(std::string("--projector: ") + e.what());
        }
    }
    return {d};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact branch enumeration for linear-optics eraser protocols", "qeraser"};
    app.require_subcommand(1);

    Source run_src;
    bool run_json = false;
    double run_tol = kDefaultTolerance;
    std::string condition;
    auto* run = app.add_subcommand("run", "Print the outcome distribution and declared audits");
    add_source_options(run, run_src);
    run->add_flag("--json", run_json, "Emit JSON");
    run->add_option("--tol", run_tol, "Audit tolerance")->check(CLI::NonNegativeNumber);
    run->add_option("--condition", condition, "Post-select on a record predicate");

    Source audit_src;
    AuditFlags flags;
    bool audit_json = false;
    double audit_tol = kDefaultTolerance;
    auto* audit = app.add_subcommand("audit", "Run the audits of one kind");
    add_source_options(audit, audit_src);
    audit->add_option("--kind", flags.kind, "no-signaling, cut-invariance, consistency, "
                                            "filter-equivalence or retro")
        ->required();
    audit->add_option("--other", flags.other, "Scenario to compare against");
    audit->add_option("--wing", flags.wing, "Wing for no-signaling");
    audit->add_option("--record,--step", flags.record, "Record whose measurement is deferred");
    audit->add_option("--event,--gate", flags.event, "Forbidden event or gate predicate");
    audit->add_option("--projector", flags.projector, "Retro projector ket, e.g. '|gr=1, G0=1>'");
    audit->add_option("--expect", flags.expect, "Expected value");
    audit->add_flag("--json", audit_json, "Emit JSON");
    audit->add_option("--tol", audit_tol, "Tolerance")->check(CLI::NonNegativeNumber);

    app.add_subcommand("list", "List built-in scenarios");

    Source print_src;
    auto* print = app.add_subcommand("print", "Print the canonical scenario text");
    add_source_options(print, print_src);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("list")) {
            for (const auto& n : builtin_names()) out << n << "\n";
            return kExitOk;
        }
        if (print->parsed()) {
            out << print_scenario(load(print_src).doc);
            return kExitOk;
        }
        if (run->parsed()) {
            const Loaded l = load(run_src);
            std::optional<RecordPredicate> keep;
            if (!condition.empty()) keep = predicate_flag("--condition", condition);
            const ScenarioReport report = run_scenario(l.doc, l.resolve, run_tol, keep);
            emit(report, run_json, out);
            return all_passed(report.audits) ? kExitOk : kExitAuditFailed;
        }
        const Loaded l = load(audit_src);
        ScenarioReport report = run_scenario(l.doc, l.resolve, audit_tol, std::nullopt, false);
        for (const auto& d : select_audits(l.doc, flags))
            report.audits.push_back(run_audit(l.doc, d, l.resolve, audit_tol));
        emit(report, audit_json, out);
        return all_passed(report.audits) ? kExitOk : kExitAuditFailed;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    }
    return kExitUsage;
}

}  // namespace qeraser
