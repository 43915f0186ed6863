#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qeraser/audits.hpp"
#include "qeraser/retro.hpp"
#include "qeraser/scenario.hpp"

namespace qeraser {

struct AuditResult {
    AuditKind kind = AuditKind::Consistency;
    std::string target;
    double value = 0.0;
    double expected = 0.0;
    bool pass = false;
    std::optional<ReversalReport> report;  // retro only
};

/// Looks up another scenario by name (no-signaling and filter-equivalence
/// audits compare against one).
using ScenarioResolver = std::function<ScenarioDoc(const std::string&)>;

ScenarioResolver builtin_resolver();

/// Errors from the engine (AuditPrecondition, CausalityViolation, ...)
/// propagate unchanged.
AuditResult run_audit(const ScenarioDoc& doc, const AuditDirective& directive,
                      const ScenarioResolver& resolve, double tol = kDefaultTolerance);

struct ScenarioReport {
    std::string scenario;
    JointDistribution distribution;
    std::vector<AuditResult> audits;
    double discarded_weight = 0.0;
};

/// Runs the protocol, post-selects on `condition` when given and evaluates
/// every declared audit when `with_audits` is set.
ScenarioReport run_scenario(const ScenarioDoc& doc, const ScenarioResolver& resolve,
                            double tol = kDefaultTolerance,
                            const std::optional<RecordPredicate>& condition = std::nullopt,
                            bool with_audits = true);

bool all_passed(const std::vector<AuditResult>& audits);

/// Rounds to 15 significant digits; -0 becomes 0.
double round15(double v);

/// Canonical JSON (sorted keys, 15-digit floats, two-space indent, trailing
/// newline).
std::string format_json(const ScenarioReport& report);
std::string format_text(const ScenarioReport& report);

}  // namespace qeraser
