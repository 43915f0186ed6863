#include "qeraser/audits.hpp"

#include <algorithm>
#include <set>

namespace qeraser {
namespace {

bool touches(const Step& s, const std::set<ModeLabel>& wing) {
    auto modes = step_modes(s);
    return std::any_of(modes.begin(), modes.end(),
                       [&](const ModeLabel& m) { return wing.contains(m); });
}

bool same_initial(const Protocol& a, const Protocol& b) {
    return a.modes() == b.modes() && max_amplitude_distance(a.initial, b.initial) <= 1e-12;
}

std::set<ModeLabel> all_labels(const Protocol& p) {
    std::set<ModeLabel> out(p.modes().begin(), p.modes().end());
    for (const auto& s : p.steps)
        for (const auto& m : step_modes(s)) out.insert(m);
    for (const auto& w : p.wings) out.insert(w.modes.begin(), w.modes.end());
    return out;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out;
}

const ConditionalStep* consumer_after(const Protocol& p, std::size_t k, const std::string& name) {
    for (std::size_t i = k + 1; i < p.steps.size(); ++i) {
        const auto* c = std::get_if<ConditionalStep>(&p.steps[i]);
        if (c && c->condition.names().contains(name)) return c;
    }
    return nullptr;
}

}  // namespace

std::vector<std::string> wing_records(const Protocol& p, const Wing& wing) {
    std::set<ModeLabel> in(wing.modes.begin(), wing.modes.end());
    std::vector<std::string> out;
    for (const auto& s : p.steps) {
        const auto* m = std::get_if<MeasureStep>(&s);
        if (m && std::all_of(m->modes.begin(), m->modes.end(),
                             [&](const ModeLabel& l) { return in.contains(l); }))
            out.push_back(m->name);
    }
    return out;
}

double no_signaling_audit(const Protocol& a, const Protocol& b, const std::string& wing) {
    const Wing* wa = a.find_wing(wing);
    const Wing* wb = b.find_wing(wing);
    if (!wa || !wb) {
        throw Error(ErrorKind::AuditPrecondition, "both protocols must declare wing '" + wing + "'");
    }
    if (a.wings != b.wings) {
        throw Error(ErrorKind::AuditPrecondition, "protocols declare different wing partitions");
    }
    if (!same_initial(a, b)) {
        throw Error(ErrorKind::AuditPrecondition, "protocols start from different states");
    }
    const std::set<ModeLabel> in(wa->modes.begin(), wa->modes.end());
    std::vector<Step> inside_a, inside_b;
    for (const auto& s : a.steps)
        if (touches(s, in)) inside_a.push_back(s);
    for (const auto& s : b.steps)
        if (touches(s, in)) inside_b.push_back(s);
    if (inside_a != inside_b) {
        throw Error(ErrorKind::AuditPrecondition,
                    "protocols differ in steps touching wing '" + wing + "'");
    }
    const auto names = wing_records(a, *wa);
    if (names.empty()) {
        throw Error(ErrorKind::AuditPrecondition, "wing '" + wing + "' has no measurement records");
    }
    const auto da = run_protocol(a).distribution.marginal(names);
    const auto db = run_protocol(b).distribution.marginal(names);
    return max_deviation(da, db);
}

std::vector<std::size_t> deferable_measurements(const Protocol& p) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const auto* m = std::get_if<MeasureStep>(&p.steps[k]);
        if (m && !consumer_after(p, k, m->name)) out.push_back(k);
    }
    return out;
}

Protocol deferred_measurement(const Protocol& p, std::size_t k) {
    if (k >= p.steps.size() || !std::holds_alternative<MeasureStep>(p.steps[k])) {
        throw Error(ErrorKind::AuditPrecondition,
                    "step " + std::to_string(k) + " is not a measurement");
    }
    const MeasureStep measured = std::get<MeasureStep>(p.steps[k]);
    if (consumer_after(p, k, measured.name)) {
        throw Error(ErrorKind::CausalityViolation,
                    "record '" + measured.name +
                        "' feeds a later conditional and cannot be deferred");
    }

    auto taken = all_labels(p);
    std::vector<ModeLabel> pointers;
    for (const auto& m : measured.modes) {
        const std::string base = "ptr_" + sanitize(measured.name) + "_" + m.str();
        std::string candidate = base;
        for (int n = 1; taken.contains(ModeLabel(candidate)); ++n)
            candidate = base + "_" + std::to_string(n);
        pointers.emplace_back(candidate);
        taken.insert(pointers.back());
    }

    Protocol out;
    out.initial = tensor(p.initial, vacuum(ModeSet(pointers)));
    out.wings = p.wings;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        if (i != k) {
            out.steps.push_back(p.steps[i]);
            continue;
        }
        for (std::size_t j = 0; j < measured.modes.size(); ++j)
            out.steps.push_back(PointerStep{measured.modes[j], pointers[j]});
    }
    out.steps.push_back(DephaseStep{pointers});
    out.steps.push_back(MeasureStep{pointers, measured.name});
    return out;
}

double cut_invariance_audit(const Protocol& p, std::size_t k) {
    const Protocol deferred = deferred_measurement(p, k);
    return max_deviation(run_protocol(p).distribution, run_protocol(deferred).distribution);
}

double causal_consistency_audit(const Protocol& p, const RecordPredicate& forbidden) {
    return run_protocol(p).distribution.probability(forbidden);
}

Protocol filtered_variant(const Protocol& p_switch, const RecordPredicate& gate) {
    Protocol out;
    out.initial = p_switch.initial;
    out.wings = p_switch.wings;
    bool found = false;
    for (const auto& s : p_switch.steps) {
        const auto* c = std::get_if<ConditionalStep>(&s);
        if (c && c->condition == gate) {
            out.steps.push_back(UnitaryStep{c->then_element});
            found = true;
        } else {
            out.steps.push_back(s);
        }
    }
    if (!found) {
        throw Error(ErrorKind::AuditPrecondition,
                    "no conditional is gated on '" + gate.to_string() + "'");
    }
    return out;
}

double filtering_vs_switching_equivalence(const Protocol& p_switch, const Protocol& p_filter,
                                          const RecordPredicate& gate) {
    const Protocol expected = filtered_variant(p_switch, gate);
    if (!same_initial(expected, p_filter) || expected.steps != p_filter.steps) {
        throw Error(ErrorKind::AuditPrecondition,
                    "filtered protocol is not the switching protocol with its gated element "
                    "applied unconditionally");
    }
    const auto switched = run_protocol(p_switch).distribution.conditioned(gate);
    const auto filtered = postselect_run(run_protocol(p_filter), gate);
    return max_deviation(switched, filtered.distribution);
}

}  // namespace qeraser
