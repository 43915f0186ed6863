#include "qeraser/retro.hpp"

#include <cmath>

namespace qeraser {

SourceSupport::SourceSupport(std::vector<BasisConfig> allowed) {
    if (allowed.empty()) {
        throw Error(ErrorKind::ConfigurationMismatch, "source support must not be empty");
    }
    modes_ = allowed.front().modes();
    for (auto& c : allowed) {
        if (c.modes() != modes_) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "support configuration " + c.to_string() + " has a different mode set");
        }
        allowed_.insert(std::move(c));
    }
}

PureState SourceSupport::uniform_state() const {
    const double amp = 1.0 / std::sqrt(static_cast<double>(allowed_.size()));
    std::vector<std::pair<BasisConfig, Amplitude>> terms;
    for (const auto& c : allowed_) terms.emplace_back(c, Amplitude{amp, 0.0});
    return superpose(terms);
}

PureState fix_global_phase(const PureState& s) {
    if (s.empty()) throw Error(ErrorKind::UndefinedState, "cannot fix the phase of a zero state");
    if (s.size() == 1) return PureState(s.modes(), {{s.terms().begin()->first, 1.0}});

    const PureState unit = normalize(s);
    auto lead = unit.terms().begin();
    for (auto it = unit.terms().begin(); it != unit.terms().end(); ++it)
        if (std::abs(it->second) > std::abs(lead->second)) lead = it;
    const double mag = std::abs(lead->second);
    const Amplitude unphase = std::conj(lead->second) / mag;
    PureState::TermMap terms = unit.terms();
    for (auto& [bits, amp] : terms) amp *= unphase;
    terms[lead->first] = Amplitude{mag, 0.0};
    return PureState(s.modes(), std::move(terms));
}

ReversalReport analyze_reversal(const PureState& post_state, const Circuit& c,
                                const SourceSupport& support) {
    ReversalReport rep;
    rep.reversed_state = apply_circuit(post_state, c, Direction::Reverse);
    if (rep.reversed_state.modes() != support.modes()) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "reversed state and source support use different mode sets");
    }
    if (rep.reversed_state.norm_sq() <= 0.0) {
        throw Error(ErrorKind::UndefinedState, "reversed state has zero norm");
    }
    double forbidden = 0.0;
    for (auto& [cfg, amp] : rep.reversed_state.expanded()) {
        if (support.contains(cfg)) {
            rep.allowed_component.emplace_back(std::move(cfg), amp);
        } else {
            forbidden += std::norm(amp);
            rep.forbidden_component.emplace_back(std::move(cfg), amp);
        }
    }
    rep.forbidden_probability = forbidden / rep.reversed_state.norm_sq();
    return rep;
}

ReversalReport reverse_collapse_analysis(const SourceSupport& support, const Circuit& c,
                                         const Projector& p) {
    const PureState forward = apply_circuit(support.uniform_state(), c, Direction::Forward);
    const CollapseResult collapsed = collapse(forward, p);
    if (collapsed.probability <= 0.0) {
        throw Error(ErrorKind::EmptyPostselection,
                    "projector " + p.to_string() + " selects a zero-probability event");
    }
    return analyze_reversal(fix_global_phase(collapsed.state), c, support);
}

}  // namespace qeraser
