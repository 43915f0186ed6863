#pragma once

// Backward application of the collapse rule.
//
// A collapsed post-measurement state is evolved backward through the circuit
// that produced it and compared against the configurations the source can
// actually emit. Any amplitude left on a configuration outside that support
// is a state the source never prepared.

#include <set>
#include <utility>
#include <vector>

#include "qeraser/measurement.hpp"
#include "qeraser/optics.hpp"

namespace qeraser {

class SourceSupport {
public:
    /// Throws ConfigurationMismatch if empty or if the configurations do not
    /// share one mode set.
    explicit SourceSupport(std::vector<BasisConfig> allowed);

    const std::set<BasisConfig>& allowed() const noexcept { return allowed_; }
    const ModeSet& modes() const noexcept { return modes_; }
    bool contains(const BasisConfig& c) const { return allowed_.contains(c); }

    /// Equal-amplitude superposition of every allowed configuration.
    PureState uniform_state() const;

private:
    std::set<BasisConfig> allowed_;
    ModeSet modes_;
};

struct ReversalReport {
    PureState reversed_state;
    std::vector<std::pair<BasisConfig, Amplitude>> allowed_component;
    std::vector<std::pair<BasisConfig, Amplitude>> forbidden_component;
    double forbidden_probability = 0.0;
};

/// Removes the global phase so the first largest-magnitude term is real and
/// positive, then normalizes. A single-term state becomes its bare
/// configuration with amplitude 1.
PureState fix_global_phase(const PureState& s);

/// Reverse-evolves `post_state` through `c` and splits the result against
/// `support`.
ReversalReport analyze_reversal(const PureState& post_state, const Circuit& c,
                                const SourceSupport& support);

/// Forward-evolves the uniform support state through `c`, collapses it with
/// `p`, strips the global phase and runs analyze_reversal on the result.
/// Throws EmptyPostselection if `p` selects nothing.
ReversalReport reverse_collapse_analysis(const SourceSupport& support, const Circuit& c,
                                         const Projector& p);

inline double forbidden_probability(const ReversalReport& rep) {
    return rep.forbidden_probability;
}

}  // namespace qeraser
