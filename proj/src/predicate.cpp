#include "qeraser/predicate.hpp"

#include <vector>

namespace qeraser {

struct RecordPredicate::Node {
    Op op = Op::Constant;
    bool value = true;
    std::string name;
    std::string pattern;
    std::vector<RecordPredicate> children;
};

namespace {

int precedence(RecordPredicate::Op op) {
    switch (op) {
        case RecordPredicate::Op::Or: return 1;
        case RecordPredicate::Op::And: return 2;
        case RecordPredicate::Op::Not: return 3;
        default: return 4;
    }
}

}  // namespace

RecordPredicate::RecordPredicate() : node_(std::make_shared<const Node>()) {}

RecordPredicate RecordPredicate::constant(bool value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->value = value;
    return RecordPredicate(std::move(n));
}

RecordPredicate RecordPredicate::equals(std::string name, std::string pattern) {
    auto n = std::make_shared<Node>();
    n->op = Op::Equals;
    n->name = std::move(name);
    n->pattern = std::move(pattern);
    return RecordPredicate(std::move(n));
}

RecordPredicate RecordPredicate::negation(RecordPredicate p) {
    auto n = std::make_shared<Node>();
    n->op = Op::Not;
    n->children = {std::move(p)};
    return RecordPredicate(std::move(n));
}

RecordPredicate RecordPredicate::both(RecordPredicate lhs, RecordPredicate rhs) {
    auto n = std::make_shared<Node>();
    n->op = Op::And;
    n->children = {std::move(lhs), std::move(rhs)};
    return RecordPredicate(std::move(n));
}

RecordPredicate RecordPredicate::either(RecordPredicate lhs, RecordPredicate rhs) {
    auto n = std::make_shared<Node>();
    n->op = Op::Or;
    n->children = {std::move(lhs), std::move(rhs)};
    return RecordPredicate(std::move(n));
}

bool RecordPredicate::operator()(const OutcomeRecord& record) const {
    switch (node_->op) {
        case Op::Constant: return node_->value;
        case Op::Equals: {
            auto got = record.get(node_->name);
            return got && *got == node_->pattern;
        }
        case Op::Not: return !lhs()(record);
        case Op::And: return lhs()(record) && rhs()(record);
        case Op::Or: return lhs()(record) || rhs()(record);
    }
    return false;
}

RecordPredicate::Op RecordPredicate::op() const { return node_->op; }
bool RecordPredicate::value() const { return node_->value; }
const std::string& RecordPredicate::name() const { return node_->name; }
const std::string& RecordPredicate::pattern() const { return node_->pattern; }

const RecordPredicate& RecordPredicate::lhs() const { return node_->children.at(0); }
const RecordPredicate& RecordPredicate::rhs() const { return node_->children.at(1); }

std::set<std::string> RecordPredicate::names() const {
    std::set<std::string> out;
    switch (node_->op) {
        case Op::Constant: break;
        case Op::Equals: out.insert(node_->name); break;
        case Op::Not: out = lhs().names(); break;
        case Op::And:
        case Op::Or: {
            out = lhs().names();
            auto r = rhs().names();
            out.insert(r.begin(), r.end());
            break;
        }
    }
    return out;
}

std::string RecordPredicate::to_string() const {
    auto wrap = [](const RecordPredicate& child, bool parens) {
        return parens ? "(" + child.to_string() + ")" : child.to_string();
    };
    const int mine = precedence(node_->op);
    switch (node_->op) {
        case Op::Constant: return node_->value ? "true" : "false";
        case Op::Equals: return node_->name + " == " + node_->pattern;
        case Op::Not: {
            const auto& c = lhs();
            return "!" + wrap(c, c.op() != Op::Constant);
        }
        case Op::And:
        case Op::Or: {
            const auto& l = lhs();
            const auto& r = rhs();
            const char* sym = node_->op == Op::And ? " && " : " || ";
            // Left-associative: a right child of equal precedence needs parens.
            return wrap(l, precedence(l.op()) < mine) + sym +
                   wrap(r, precedence(r.op()) <= mine);
        }
    }
    return {};
}

bool operator==(const RecordPredicate& a, const RecordPredicate& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case RecordPredicate::Op::Constant: return a.value() == b.value();
        case RecordPredicate::Op::Equals:
            return a.name() == b.name() && a.pattern() == b.pattern();
        case RecordPredicate::Op::Not: return a.lhs() == b.lhs();
        case RecordPredicate::Op::And:
        case RecordPredicate::Op::Or: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
}

}  // namespace qeraser
