#pragma once

// Line-oriented scenario files.
//
//   # comment
//   scenario NAME
//   modes g0 g1 G0 G1
//   state 1/sqrt2 |g0=1, G0=1> + 1/sqrt2 |g1=1, G1=1>
//   step bs g0 g1
//   step phase g0 0.25
//   step relabel g0->gt g1->gr
//   step measure gt gr as D
//   step if D == 10 then relabel a->b b->a else phase a 1.5
//   step pointer gt ptr
//   step dephase ptr
//   wing signal: g0 g1 gt gr
//   support |g0=1, G0=1> |g1=1, G1=1>
//   audit no-signaling OTHER WING
//   audit cut-invariance RECORD
//   audit consistency PREDICATE
//   audit filter-equivalence OTHER PREDICATE
//   audit retro |gr=1, G0=1> expect 0.5
//
// Modes omitted from a state or support ket are empty. A retro ket is a
// projector and constrains only the modes it lists. Predicates combine
// `NAME == PATTERN` tests with !, &&, || and parentheses.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qeraser/error.hpp"
#include "qeraser/protocol.hpp"
#include "qeraser/retro.hpp"

namespace qeraser {

using Ket = std::vector<std::pair<ModeLabel, int>>;

struct StateTerm {
    Amplitude coeff;
    Ket ket;
    friend bool operator==(const StateTerm&, const StateTerm&) = default;
};

enum class AuditKind { NoSignaling, CutInvariance, Consistency, FilterEquivalence, Retro };

std::string_view to_string(AuditKind kind);
std::optional<AuditKind> audit_kind_from_string(std::string_view s);

struct AuditDirective {
    AuditKind kind = AuditKind::Consistency;
    std::string other;         // no-signaling, filter-equivalence
    std::string wing;          // no-signaling
    std::string record;        // cut-invariance
    RecordPredicate event;     // consistency event, filter-equivalence gate
    Ket projector;             // retro
    std::optional<double> expect;
    friend bool operator==(const AuditDirective&, const AuditDirective&) = default;
};

struct ScenarioDoc {
    std::string name;
    std::vector<ModeLabel> modes;
    std::vector<StateTerm> state;
    std::vector<Step> steps;
    std::vector<Wing> wings;
    std::vector<Ket> support;
    std::vector<AuditDirective> audits;
    friend bool operator==(const ScenarioDoc&, const ScenarioDoc&) = default;
};

/// Syntax or semantic diagnostic with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, int line, int column, const std::string& message,
               std::vector<std::string> expected = {});

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

/// Throws ParseError (SyntaxError or SemanticError) and nothing else for any
/// input text.
ScenarioDoc parse_scenario(std::string_view text);

/// Standalone predicate / ket, as accepted on the command line.
RecordPredicate parse_predicate(std::string_view text);
Ket parse_ket(std::string_view text);

/// Canonical source text; parse_scenario(print_scenario(d)) == d.
std::string print_scenario(const ScenarioDoc& doc);
std::string format_ket(const Ket& ket);
std::string format_coefficient(Amplitude c);

/// Throws SemanticError when the document does not describe a valid protocol.
Protocol to_protocol(const ScenarioDoc& doc);
std::optional<SourceSupport> to_support(const ScenarioDoc& doc);
Projector to_projector(const Ket& ket);

/// Index of the Measure step writing `record`, if any.
std::optional<std::size_t> measure_step_index(const ScenarioDoc& doc, const std::string& record);

const std::vector<std::string>& builtin_names();
std::string_view builtin_source(std::string_view name);
/// Throws UnknownScenario listing the available names.
ScenarioDoc builtin_scenario(std::string_view name);

}  // namespace qeraser
