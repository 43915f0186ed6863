#include "qeraser/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace qeraser {
namespace {

void require_nonzero(const PureState& s, const char* what) {
    if (s.norm_sq() <= 0.0) {
        throw Error(ErrorKind::UndefinedState, std::string(what) + " of a zero-norm state");
    }
}

void require_modes(const PureState& s, const std::vector<ModeLabel>& modes) {
    for (const auto& m : modes) {
        if (!s.modes().contains(m)) {
            throw Error(ErrorKind::ConfigurationMismatch, "unknown mode '" + m.str() + "'");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(std::vector<Constraint> constraints) {
    std::sort(constraints.begin(), constraints.end());
    constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].occupation != 0 && constraints[i].occupation != 1) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "projector occupation must be 0 or 1 on '" +
                            constraints[i].mode.str() + "'");
        }
        if (i > 0 && constraints[i].mode == constraints[i - 1].mode) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "contradictory projector constraints on '" +
                            constraints[i].mode.str() + "'");
        }
    }
    constraints_ = std::move(constraints);
}

bool Projector::matches(const PureState& s, PureState::Bits bits) const {
    return std::all_of(constraints_.begin(), constraints_.end(), [&](const Constraint& c) {
        return s.occupation(bits, c.mode) == c.occupation;
    });
}

std::string Projector::to_string() const {
    std::string out = "|";
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (i) out += ", ";
        out += constraints_[i].mode.str() + "=" + std::to_string(constraints_[i].occupation);
    }
    return out + ">";
}

// ---------------------------------------------------------------------------
// OutcomeRecord

void OutcomeRecord::add(const std::string& name, const std::string& pattern) {
    if (!entries_.emplace(name, pattern).second) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "record '" + name + "' was already written in this run");
    }
}

std::optional<std::string> OutcomeRecord::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

OutcomeRecord OutcomeRecord::restricted(const std::vector<std::string>& names) const {
    OutcomeRecord out;
    for (const auto& n : names) {
        auto it = entries_.find(n);
        if (it != entries_.end()) out.entries_.insert(*it);
    }
    return out;
}

std::string OutcomeRecord::to_string() const {
    std::string out;
    for (const auto& [name, pattern] : entries_) {
        if (!out.empty()) out += " ";
        out += name + "=" + pattern;
    }
    return out.empty() ? "{}" : out;
}

double Ensemble::total_weight() const {
    double w = 0.0;
    for (const auto& b : branches) w += b.weight;
    return w;
}

// ---------------------------------------------------------------------------
// Operations

CollapseResult collapse(const PureState& state, const Projector& p) {
    require_nonzero(state, "collapse");
    for (const auto& c : p.constraints()) (void)state.modes().bit(c.mode);
    PureState::TermMap kept;
    for (const auto& [bits, amp] : state.terms())
        if (p.matches(state, bits)) kept.emplace(bits, amp);
    PureState projected(state.modes(), std::move(kept));
    const double probability = projected.norm_sq() / state.norm_sq();
    if (projected.empty()) return {projected, 0.0};
    return {normalize(projected), probability};
}

std::string pattern_of(const PureState& s, PureState::Bits bits,
                       const std::vector<ModeLabel>& modes) {
    std::string out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(s.occupation(bits, m) ? '1' : '0');
    return out;
}

std::vector<MeasurementOutcome> measure(const PureState& state,
                                        const std::vector<ModeLabel>& modes,
                                        const std::string& name) {
    if (modes.empty()) {
        throw Error(ErrorKind::ConfigurationMismatch, "measurement '" + name + "' has no modes");
    }
    require_modes(state, modes);
    require_nonzero(state, "measurement");

    std::map<std::string, PureState::TermMap> parts;
    for (const auto& [bits, amp] : state.terms())
        parts[pattern_of(state, bits, modes)].emplace(bits, amp);

    std::vector<MeasurementOutcome> out;
    for (auto& [pattern, terms] : parts) {
        PureState part(state.modes(), std::move(terms));
        const double p = part.norm_sq() / state.norm_sq();
        if (p <= kOutcomeThreshold) continue;
        OutcomeRecord rec;
        rec.add(name, pattern);
        out.push_back({std::move(rec), p, normalize(part)});
    }
    return out;
}

PureState controlled_flip(const PureState& state, const ModeLabel& control,
                          const ModeLabel& target) {
    if (control == target) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "pointer '" + target.str() + "' cannot watch itself");
    }
    const auto cb = state.modes().bit(control);
    const auto tb = state.modes().bit(target);
    PureState::TermMap out;
    for (const auto& [bits, amp] : state.terms()) out[(bits & cb) ? bits ^ tb : bits] = amp;
    return PureState(state.modes(), std::move(out));
}

PureState entangle_pointer(const PureState& state, const ModeLabel& watched,
                           const ModeLabel& pointer) {
    const auto pb = state.modes().bit(pointer);
    for (const auto& [bits, amp] : state.terms()) {
        if (bits & pb) {
            throw Error(ErrorKind::AncillaNotFresh,
                        "pointer '" + pointer.str() + "' is already excited");
        }
    }
    return controlled_flip(state, watched, pointer);
}

Ensemble dephase(const PureState& state, const std::vector<ModeLabel>& pointer_modes) {
    if (pointer_modes.empty()) {
        throw Error(ErrorKind::ConfigurationMismatch, "dephase needs at least one pointer mode");
    }
    require_modes(state, pointer_modes);
    require_nonzero(state, "dephasing");

    std::map<std::string, PureState::TermMap> parts;
    for (const auto& [bits, amp] : state.terms())
        parts[pattern_of(state, bits, pointer_modes)].emplace(bits, amp);

    Ensemble out;
    for (auto& [pattern, terms] : parts) {
        PureState part(state.modes(), std::move(terms));
        out.branches.push_back({part.norm_sq() / state.norm_sq(), normalize(part), {}});
    }
    return out;
}

PatternDistribution marginal(const PureState& state, const std::vector<ModeLabel>& modes) {
    require_modes(state, modes);
    require_nonzero(state, "marginal");
    PatternDistribution out;
    for (const auto& [bits, amp] : state.terms())
        out[pattern_of(state, bits, modes)] += std::norm(amp) / state.norm_sq();
    return out;
}

PatternDistribution marginal(const Ensemble& ensemble, const std::vector<ModeLabel>& modes) {
    PatternDistribution out;
    for (const auto& b : ensemble.branches) {
        if (b.weight <= 0.0) continue;
        for (const auto& [pattern, p] : marginal(b.state, modes)) out[pattern] += b.weight * p;
    }
    return out;
}

PatternDistribution marginal(const std::vector<MeasurementOutcome>& outcomes,
                             const std::vector<ModeLabel>& modes) {
    PatternDistribution out;
    for (const auto& o : outcomes)
        for (const auto& [pattern, p] : marginal(o.state, modes)) out[pattern] += o.probability * p;
    return out;
}

PostselectResult postselect(const Ensemble& ensemble,
                            const std::function<bool(const OutcomeRecord&)>& keep) {
    Ensemble kept;
    double retained = 0.0, discarded = 0.0;
    for (const auto& b : ensemble.branches) {
        if (keep(b.record)) {
            kept.branches.push_back(b);
            retained += b.weight;
        } else {
            discarded += b.weight;
        }
    }
    if (kept.branches.empty() || retained <= 0.0) {
        throw Error(ErrorKind::EmptyPostselection, "post-selection discarded every branch");
    }
    for (auto& b : kept.branches) b.weight /= retained;
    return {std::move(kept), discarded};
}

}  // namespace qeraser
