#pragma once

#include <memory>
#include <set>
#include <string>

#include "qeraser/measurement.hpp"

namespace qeraser {

/// Boolean expression over outcome records: constants, `NAME == PATTERN`
/// tests, negation, conjunction and disjunction. A test on a record name the
/// record does not contain evaluates to false.
class RecordPredicate {
public:
    enum class Op { Constant, Equals, Not, And, Or };

    /// Defaults to the always-true predicate.
    RecordPredicate();

    static RecordPredicate constant(bool value);
    static RecordPredicate equals(std::string name, std::string pattern);
    static RecordPredicate negation(RecordPredicate p);
    static RecordPredicate both(RecordPredicate lhs, RecordPredicate rhs);
    static RecordPredicate either(RecordPredicate lhs, RecordPredicate rhs);

    bool operator()(const OutcomeRecord& record) const;

    Op op() const;
    bool value() const;
    const std::string& name() const;
    const std::string& pattern() const;
    const RecordPredicate& lhs() const;
    const RecordPredicate& rhs() const;

    /// Every record name an Equals leaf refers to.
    std::set<std::string> names() const;

    /// Source form; parses back to a structurally equal predicate.
    std::string to_string() const;

    friend bool operator==(const RecordPredicate& a, const RecordPredicate& b);

private:
    struct Node;
    explicit RecordPredicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace qeraser
