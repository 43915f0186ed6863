#pragma once

// Projective measurement, collapse, pointer ancillas and dephasing.
//
// Mixtures are represented as ensembles of weighted pure branches, each
// carrying the classical record that produced it.

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qeraser/state.hpp"

namespace qeraser {

inline constexpr double kOutcomeThreshold = 1e-14;

struct Constraint {
    ModeLabel mode;
    int occupation = 0;
    friend auto operator<=>(const Constraint&, const Constraint&) = default;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Conjunction of occupation constraints. An empty projector is the identity.
class Projector {
public:
    Projector() = default;
    /// Identical duplicates collapse; contradictory ones throw
    /// ConfigurationMismatch.
    explicit Projector(std::vector<Constraint> constraints);
    Projector(std::initializer_list<Constraint> constraints)
        : Projector(std::vector<Constraint>(constraints)) {}

    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    bool matches(const PureState& s, PureState::Bits bits) const;
    std::string to_string() const;

    friend bool operator==(const Projector&, const Projector&) = default;

private:
    std::vector<Constraint> constraints_;
};

/// Named classical outcomes, e.g. {"D": "10", "U": "01"}. A pattern lists the
/// occupations of the measured modes in the order they were measured.
class OutcomeRecord {
public:
    OutcomeRecord() = default;
    OutcomeRecord(std::initializer_list<std::pair<const std::string, std::string>> entries)
        : entries_(entries) {}

    /// Throws ConfigurationMismatch if `name` is already recorded.
    void add(const std::string& name, const std::string& pattern);
    std::optional<std::string> get(const std::string& name) const;
    bool has(const std::string& name) const { return entries_.contains(name); }

    /// Keeps only the listed names.
    OutcomeRecord restricted(const std::vector<std::string>& names) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    std::string to_string() const;

    friend auto operator<=>(const OutcomeRecord&, const OutcomeRecord&) = default;
    friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;

private:
    std::map<std::string, std::string> entries_;
};

struct Branch {
    double weight = 0.0;
    PureState state;
    OutcomeRecord record;
};

struct Ensemble {
    std::vector<Branch> branches;
    double total_weight() const;
};

struct CollapseResult {
    PureState state;     // renormalized; empty sentinel when probability is 0
    double probability;  // Born probability relative to the input norm
};

CollapseResult collapse(const PureState& state, const Projector& p);

struct MeasurementOutcome {
    OutcomeRecord record;
    double probability;
    PureState state;
};

/// Occupation pattern of `modes` (in the given order) within one term.
std::string pattern_of(const PureState& s, PureState::Bits bits,
                       const std::vector<ModeLabel>& modes);

/// One entry per pattern with probability above kOutcomeThreshold, ordered by
/// pattern. Throws UndefinedState on a zero-norm input.
std::vector<MeasurementOutcome> measure(const PureState& state,
                                        const std::vector<ModeLabel>& modes,
                                        const std::string& name);

/// Flips `target` on every term where `control` is occupied. An involution.
PureState controlled_flip(const PureState& state, const ModeLabel& control,
                          const ModeLabel& target);

/// controlled_flip onto a fresh ancilla; throws AncillaNotFresh if the pointer
/// is excited in any term.
PureState entangle_pointer(const PureState& state, const ModeLabel& watched,
                           const ModeLabel& pointer);

/// Splits the state by its pattern on `pointer_modes`; each part becomes a
/// normalized branch weighted by its probability. Records are left empty.
Ensemble dephase(const PureState& state, const std::vector<ModeLabel>& pointer_modes);

using PatternDistribution = std::map<std::string, double>;

PatternDistribution marginal(const PureState& state, const std::vector<ModeLabel>& modes);
PatternDistribution marginal(const Ensemble& ensemble, const std::vector<ModeLabel>& modes);
PatternDistribution marginal(const std::vector<MeasurementOutcome>& outcomes,
                             const std::vector<ModeLabel>& modes);

struct PostselectResult {
    Ensemble ensemble;
    double discarded_weight;
};

/// Keeps branches whose record satisfies `keep` and renormalizes them.
/// Throws EmptyPostselection when nothing survives.
PostselectResult postselect(const Ensemble& ensemble,
                            const std::function<bool(const OutcomeRecord&)>& keep);

}  // namespace qeraser
