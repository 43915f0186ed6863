#include "qeraser/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qeraser {

std::vector<ModeLabel> step_modes(const Step& s) {
    return std::visit(
        [](const auto& st) -> std::vector<ModeLabel> {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, UnitaryStep>) {
                return element_modes(st.element);
            } else if constexpr (std::is_same_v<T, MeasureStep>) {
                return st.modes;
            } else if constexpr (std::is_same_v<T, ConditionalStep>) {
                auto out = element_modes(st.then_element);
                if (st.else_element) {
                    auto more = element_modes(*st.else_element);
                    out.insert(out.end(), more.begin(), more.end());
                }
                return out;
            } else if constexpr (std::is_same_v<T, PointerStep>) {
                return {st.watched, st.pointer};
            } else {
                return st.pointers;
            }
        },
        s);
}

const Wing* Protocol::find_wing(const std::string& name) const {
    for (const auto& w : wings)
        if (w.name == name) return &w;
    return nullptr;
}

void validate(const Protocol& p) {
    if (std::abs(p.initial.norm_sq() - 1.0) > 1e-9) {
        throw Error(ErrorKind::UndefinedState, "initial state is not normalized");
    }

    ModeSet current = p.modes();
    std::set<ModeLabel> every(current.begin(), current.end());
    std::set<std::string> records;
    auto require = [&](const ModeLabel& m) {
        if (!current.contains(m)) {
            throw Error(ErrorKind::ConfigurationMismatch, "step references unknown mode '" +
                                                              m.str() + "'");
        }
    };

    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const Step& step = p.steps[i];
        if (const auto* u = std::get_if<UnitaryStep>(&step)) {
            current = element_output_modes(current, u->element, Direction::Forward);
            every.insert(current.begin(), current.end());
        } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
            if (m->modes.empty()) {
                throw Error(ErrorKind::ConfigurationMismatch,
                            "measurement '" + m->name + "' has no modes");
            }
            for (const auto& mode : m->modes) require(mode);
            if (!records.insert(m->name).second) {
                throw Error(ErrorKind::ConfigurationMismatch,
                            "record '" + m->name + "' is written twice");
            }
        } else if (const auto* c = std::get_if<ConditionalStep>(&step)) {
            for (const auto& name : c->condition.names()) {
                if (!records.contains(name)) {
                    throw Error(ErrorKind::CausalityViolation,
                                "conditional at step " + std::to_string(i) +
                                    " reads record '" + name + "' before it is measured");
                }
            }
            for (const Element* e : {&c->then_element,
                                     c->else_element ? &*c->else_element : nullptr}) {
                if (!e) continue;
                if (!preserves_mode_set(*e)) {
                    throw Error(ErrorKind::ConfigurationMismatch,
                                "conditional elements must not change the mode set");
                }
                (void)element_output_modes(current, *e, Direction::Forward);
            }
        } else if (const auto* ptr = std::get_if<PointerStep>(&step)) {
            require(ptr->watched);
            require(ptr->pointer);
        } else if (const auto* d = std::get_if<DephaseStep>(&step)) {
            if (d->pointers.empty()) {
                throw Error(ErrorKind::ConfigurationMismatch, "dephase needs pointer modes");
            }
            for (const auto& mode : d->pointers) require(mode);
        }
    }

    std::set<std::string> wing_names;
    std::set<ModeLabel> claimed;
    for (const auto& w : p.wings) {
        if (!wing_names.insert(w.name).second) {
            throw Error(ErrorKind::ConfigurationMismatch, "wing '" + w.name + "' declared twice");
        }
        for (const auto& m : w.modes) {
            if (!every.contains(m)) {
                throw Error(ErrorKind::ConfigurationMismatch,
                            "wing '" + w.name + "' names unknown mode '" + m.str() + "'");
            }
            if (!claimed.insert(m).second) {
                throw Error(ErrorKind::ConfigurationMismatch,
                            "mode '" + m.str() + "' belongs to more than one wing");
            }
        }
    }
}

Circuit unitary_prefix(const Protocol& p) {
    Circuit c;
    for (const auto& s : p.steps) {
        const auto* u = std::get_if<UnitaryStep>(&s);
        if (!u) break;
        c.steps.push_back(u->element);
    }
    return c;
}

// ---------------------------------------------------------------------------
// JointDistribution

void JointDistribution::add(const OutcomeRecord& record, double p) { entries_[record] += p; }

double JointDistribution::total() const {
    double t = 0.0;
    for (const auto& [r, p] : entries_) t += p;
    return t;
}

double JointDistribution::probability(const RecordPredicate& event) const {
    double t = 0.0;
    for (const auto& [r, p] : entries_)
        if (event(r)) t += p;
    return t;
}

double JointDistribution::at(const OutcomeRecord& record) const {
    auto it = entries_.find(record);
    return it == entries_.end() ? 0.0 : it->second;
}

JointDistribution JointDistribution::marginal(const std::vector<std::string>& names) const {
    JointDistribution out;
    for (const auto& [r, p] : entries_) out.add(r.restricted(names), p);
    return out;
}

JointDistribution JointDistribution::conditioned(const RecordPredicate& given) const {
    const double pg = probability(given);
    if (pg <= 0.0) {
        throw Error(ErrorKind::ConditioningOnNull,
                    "conditioning event '" + given.to_string() + "' has probability 0");
    }
    JointDistribution out;
    for (const auto& [r, p] : entries_)
        if (given(r)) out.add(r, p / pg);
    return out;
}

double max_deviation(const JointDistribution& a, const JointDistribution& b) {
    double worst = 0.0;
    for (const auto& [r, p] : a.entries()) worst = std::max(worst, std::abs(p - b.at(r)));
    for (const auto& [r, p] : b.entries())
        if (!a.entries().contains(r)) worst = std::max(worst, std::abs(p));
    return worst;
}

double conditional_probability(const JointDistribution& d, const RecordPredicate& event,
                               const RecordPredicate& given) {
    const double pg = d.probability(given);
    if (pg <= 0.0) {
        throw Error(ErrorKind::ConditioningOnNull,
                    "conditioning event '" + given.to_string() + "' has probability 0");
    }
    return d.probability(RecordPredicate::both(event, given)) / pg;
}

// ---------------------------------------------------------------------------
// Branch enumeration

namespace {

class Runner {
public:
    explicit Runner(const Protocol& p) : p_(p) {}

    void run(std::size_t idx, double weight, PureState state, OutcomeRecord record,
             BranchNode& node, JointDistribution& dist) const {
        for (; idx < p_.steps.size(); ++idx) {
            const Step& step = p_.steps[idx];
            if (const auto* u = std::get_if<UnitaryStep>(&step)) {
                state = apply_element(state, u->element);
            } else if (const auto* c = std::get_if<ConditionalStep>(&step)) {
                if (c->condition(record)) {
                    state = apply_element(state, c->then_element);
                } else if (c->else_element) {
                    state = apply_element(state, *c->else_element);
                }
            } else if (const auto* ptr = std::get_if<PointerStep>(&step)) {
                state = entangle_pointer(state, ptr->watched, ptr->pointer);
            } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
                for (auto& outcome : measure(state, m->modes, m->name)) {
                    const double w = weight * outcome.probability;
                    if (w <= kBranchPruneWeight) continue;
                    OutcomeRecord child_record = record;
                    const std::string pattern = *outcome.record.get(m->name);
                    child_record.add(m->name, pattern);
                    BranchNode& child = node.children.emplace_back();
                    child.label = m->name + "=" + pattern;
                    child.weight = w;
                    run(idx + 1, w, std::move(outcome.state), std::move(child_record), child, dist);
                }
                return;
            } else if (const auto* d = std::get_if<DephaseStep>(&step)) {
                for (auto& b : dephase(state, d->pointers).branches) {
                    const double w = weight * b.weight;
                    if (w <= kBranchPruneWeight) continue;
                    BranchNode& child = node.children.emplace_back();
                    child.label = "~" + pattern_of(b.state, b.state.terms().begin()->first,
                                                   d->pointers);
                    child.weight = w;
                    run(idx + 1, w, std::move(b.state), record, child, dist);
                }
                return;
            }
        }
        dist.add(record, weight);
        node.leaf = Branch{weight, std::move(state), std::move(record)};
    }

private:
    const Protocol& p_;
};

void collect_leaves(const BranchNode& node, std::vector<Branch>& out) {
    if (node.leaf) out.push_back(*node.leaf);
    for (const auto& c : node.children) collect_leaves(c, out);
}

}  // namespace

std::vector<Branch> BranchTree::leaves() const {
    std::vector<Branch> out;
    collect_leaves(root, out);
    return out;
}

RunResult run_protocol(const Protocol& p) {
    validate(p);
    RunResult result;
    result.tree.root_state = p.initial;
    result.tree.root.label = "";
    result.tree.root.weight = 1.0;
    Runner(p).run(0, 1.0, p.initial, OutcomeRecord{}, result.tree.root, result.distribution);
    return result;
}

PostselectedDistribution postselect_run(const RunResult& run, const RecordPredicate& keep) {
    PostselectResult kept;
    try {
        kept = postselect(run.tree.ensemble(), keep);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyPostselection) throw;
        throw Error(ErrorKind::ConditioningOnNull,
                    "post-selection on '" + keep.to_string() + "' keeps no runs");
    }
    PostselectedDistribution out;
    out.discarded_weight = kept.discarded_weight;
    for (const auto& b : kept.ensemble.branches) out.distribution.add(b.record, b.weight);
    return out;
}

}  // namespace qeraser
