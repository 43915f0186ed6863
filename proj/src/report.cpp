#include "qeraser/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace qeraser {
namespace {

using nlohmann::json;

Error missing(const std::string& what) { return Error(ErrorKind::AuditPrecondition, what); }

std::size_t measure_index(const ScenarioDoc& doc, const std::string& record) {
    auto k = measure_step_index(doc, record);
    if (!k) throw missing("no measurement writes record '" + record + "'");
    return *k;
}

json config_json(const BasisConfig& c) {
    json out = json::object();
    for (const auto& [mode, occ] : c.entries()) out[mode.str()] = occ;
    return out;
}

json terms_json(const std::vector<std::pair<BasisConfig, Amplitude>>& terms) {
    json out = json::array();
    for (const auto& [config, amp] : terms) {
        out.push_back({{"config", config_json(config)},
                       {"re", round15(amp.real())},
                       {"im", round15(amp.imag())}});
    }
    return out;
}

json report_json(const ReversalReport& r) {
    return {{"reversed_state", terms_json(r.reversed_state.expanded())},
            {"allowed", terms_json(r.allowed_component)},
            {"forbidden", terms_json(r.forbidden_component)},
            {"forbidden_probability", round15(r.forbidden_probability)}};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", round15(v));
    return buf;
}

std::string amp_text(Amplitude a) {
    const double re = round15(a.real());
    const double im = round15(a.imag());
    if (im == 0.0) return fmt(re);
    if (re == 0.0) return fmt(im) + "i";
    return fmt(re) + (im < 0 ? " - " : " + ") + fmt(std::abs(im)) + "i";
}

}  // namespace

ScenarioResolver builtin_resolver() {
    return [](const std::string& name) { return builtin_scenario(name); };
}

AuditResult run_audit(const ScenarioDoc& doc, const AuditDirective& d,
                      const ScenarioResolver& resolve, double tol) {
    AuditResult r;
    r.kind = d.kind;
    r.expected = d.expect.value_or(0.0);
    const Protocol p = to_protocol(doc);
    switch (d.kind) {
        case AuditKind::NoSignaling: {
            r.target = d.other + " " + d.wing;
            r.value = no_signaling_audit(p, to_protocol(resolve(d.other)), d.wing);
            break;
        }
        case AuditKind::CutInvariance: {
            r.target = d.record;
            r.value = cut_invariance_audit(p, measure_index(doc, d.record));
            break;
        }
        case AuditKind::Consistency: {
            r.target = d.event.to_string();
            r.value = causal_consistency_audit(p, d.event);
            break;
        }
        case AuditKind::FilterEquivalence: {
            r.target = d.other + " " + d.event.to_string();
            r.value = filtering_vs_switching_equivalence(p, to_protocol(resolve(d.other)), d.event);
            break;
        }
        case AuditKind::Retro: {
            r.target = format_ket(d.projector);
            auto support = to_support(doc);
            if (!support) throw missing("retro audit needs a support declaration");
            r.report = reverse_collapse_analysis(*support, unitary_prefix(p), to_projector(d.projector));
            r.value = r.report->forbidden_probability;
            break;
        }
    }
    r.pass = std::abs(r.value - r.expected) <= tol;
    return r;
}

ScenarioReport run_scenario(const ScenarioDoc& doc, const ScenarioResolver& resolve, double tol,
                            const std::optional<RecordPredicate>& condition, bool with_audits) {
    ScenarioReport out;
    out.scenario = doc.name;
    RunResult run = run_protocol(to_protocol(doc));
    if (condition) {
        auto kept = postselect_run(run, *condition);
        out.distribution = std::move(kept.distribution);
        out.discarded_weight = kept.discarded_weight;
    } else {
        out.distribution = std::move(run.distribution);
    }
    if (with_audits)
        for (const auto& d : doc.audits) out.audits.push_back(run_audit(doc, d, resolve, tol));
    return out;
}

bool all_passed(const std::vector<AuditResult>& audits) {
    for (const auto& a : audits)
        if (!a.pass) return false;
    return true;
}

double round15(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string format_json(const ScenarioReport& report) {
    json dist = json::array();
    for (const auto& [record, p] : report.distribution.entries()) {
        json rec = json::object();
        for (const auto& [name, pattern] : record.entries()) rec[name] = pattern;
        dist.push_back({{"record", rec}, {"p", round15(p)}});
    }
    json audits = json::array();
    for (const auto& a : report.audits) {
        json entry = {{"kind", std::string(to_string(a.kind))},
                      {"target", a.target},
                      {"value", round15(a.value)},
                      {"pass", a.pass}};
        if (a.report) entry["report"] = report_json(*a.report);
        audits.push_back(std::move(entry));
    }
    json doc = {{"scenario", report.scenario},
                {"distribution", dist},
                {"audits", audits},
                {"discarded_weight", round15(report.discarded_weight)}};
    return doc.dump(2) + "\n";
}

std::string format_text(const ScenarioReport& report) {
    std::ostringstream os;
    os << "scenario " << (report.scenario.empty() ? "(unnamed)" : report.scenario) << "\n";
    for (const auto& [record, p] : report.distribution.entries())
        os << "  " << (record.entries().empty() ? "(no records)" : record.to_string()) << "  "
           << fmt(p) << "\n";
    if (report.discarded_weight != 0.0)
        os << "discarded weight " << fmt(report.discarded_weight) << "\n";
    for (const auto& a : report.audits) {
        os << (a.pass ? "PASS " : "FAIL ") << to_string(a.kind) << " " << a.target << "  value "
           << fmt(a.value) << " expected " << fmt(a.expected) << "\n";
        if (a.report) {
            os << "  reversed state\n";
            for (const auto& [c, amp] : a.report->allowed_component)
                os << "    " << c.to_string() << "  " << amp_text(amp) << "\n";
            for (const auto& [c, amp] : a.report->forbidden_component)
                os << "    " << c.to_string() << "  " << amp_text(amp) << "  (outside support)\n";
            os << "  forbidden probability " << fmt(a.report->forbidden_probability) << "\n";
        }
    }
    return os.str();
}

}  // namespace qeraser
