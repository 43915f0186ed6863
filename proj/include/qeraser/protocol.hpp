#pragma once

// Timelines of unitary, measurement and classically conditioned steps.
//
// Running a protocol enumerates every measurement branch exactly (no
// sampling). A Conditional reads only records written by earlier Measure
// steps; that ordering is the whole feed-forward model.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qeraser/measurement.hpp"
#include "qeraser/optics.hpp"
#include "qeraser/predicate.hpp"

namespace qeraser {

inline constexpr double kBranchPruneWeight = 1e-14;

struct UnitaryStep {
    Element element;
    friend bool operator==(const UnitaryStep&, const UnitaryStep&) = default;
};

struct MeasureStep {
    std::vector<ModeLabel> modes;
    std::string name;
    friend bool operator==(const MeasureStep&, const MeasureStep&) = default;
};

/// Applies `then_element` on branches whose record satisfies `condition`,
/// `else_element` (or nothing) on the others. Both elements must keep the
/// mode set unchanged so every branch shares one set of modes.
struct ConditionalStep {
    RecordPredicate condition;
    Element then_element;
    std::optional<Element> else_element;
    friend bool operator==(const ConditionalStep&, const ConditionalStep&) = default;
};

struct PointerStep {
    ModeLabel watched;
    ModeLabel pointer;
    friend bool operator==(const PointerStep&, const PointerStep&) = default;
};

struct DephaseStep {
    std::vector<ModeLabel> pointers;
    friend bool operator==(const DephaseStep&, const DephaseStep&) = default;
};

using Step = std::variant<UnitaryStep, MeasureStep, ConditionalStep, PointerStep, DephaseStep>;

/// Every mode label a step touches.
std::vector<ModeLabel> step_modes(const Step& s);

struct Wing {
    std::string name;
    std::vector<ModeLabel> modes;
    friend bool operator==(const Wing&, const Wing&) = default;
};

struct Protocol {
    PureState initial;
    std::vector<Step> steps;
    std::vector<Wing> wings;

    const ModeSet& modes() const { return initial.modes(); }
    const Wing* find_wing(const std::string& name) const;
};

/// Checks a protocol's static invariants: unit-norm initial state, modes
/// known at each step, unique record names, disjoint wings, and causal
/// ordering of Conditionals (CausalityViolation).
void validate(const Protocol& p);

/// Leading run of Unitary steps as a circuit.
Circuit unitary_prefix(const Protocol& p);

class JointDistribution {
public:
    void add(const OutcomeRecord& record, double p);
    const std::map<OutcomeRecord, double>& entries() const noexcept { return entries_; }
    double total() const;
    double probability(const RecordPredicate& event) const;
    double at(const OutcomeRecord& record) const;

    /// Sums out every record name not listed.
    JointDistribution marginal(const std::vector<std::string>& names) const;
    /// Restricts to `given` and renormalizes; ConditioningOnNull if P(given)=0.
    JointDistribution conditioned(const RecordPredicate& given) const;

private:
    std::map<OutcomeRecord, double> entries_;
};

/// max over records of |P_a(r) - P_b(r)|, absent records counted as 0.
double max_deviation(const JointDistribution& a, const JointDistribution& b);

struct BranchNode {
    std::string label;  // "NAME=PATTERN" at a measurement fork, "~PATTERN" at a dephasing fork
    double weight = 1.0;
    std::vector<BranchNode> children;
    std::optional<Branch> leaf;
};

struct BranchTree {
    PureState root_state;
    BranchNode root;

    std::vector<Branch> leaves() const;
    Ensemble ensemble() const { return Ensemble{leaves()}; }
};

struct RunResult {
    JointDistribution distribution;
    BranchTree tree;
};

RunResult run_protocol(const Protocol& p);

/// P(event and given) / P(given); ConditioningOnNull if P(given) = 0.
double conditional_probability(const JointDistribution& d, const RecordPredicate& event,
                               const RecordPredicate& given);

/// Joint distribution of the leaves kept by post-selection, renormalized.
struct PostselectedDistribution {
    JointDistribution distribution;
    double discarded_weight = 0.0;
};

PostselectedDistribution postselect_run(const RunResult& run, const RecordPredicate& keep);

}  // namespace qeraser
