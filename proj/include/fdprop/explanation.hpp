#ifndef FDPROP_EXPLANATION_HPP
#define FDPROP_EXPLANATION_HPP

#include "fdprop/deduction.hpp"
#include "fdprop/propagation.hpp"

#include <deque>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fdprop {

/// A proof tree for a value withdrawal: the root pair is deduced by one
/// deduction-rule instance whose body pairs are each explained by the
/// corresponding subtree. Leaves carry facts. Subtrees may be shared in
/// memory; serialization always unfolds them to a tree.
class Explanation {
public:
    using Ptr = std::shared_ptr<const Explanation>;

    Explanation(DeductionRule rule, std::vector<Ptr> children)
        : rule_(std::move(rule)), children_(std::move(children)) {
        if (children_.size() != rule_.body.size())
            throw InputError("explanation needs one subtree per body pair");
        for (std::size_t i = 0; i < children_.size(); ++i)
            if (!children_[i] || !(children_[i]->root() == rule_.body[i]))
                throw InputError("subtree root does not match the body pair it explains");
    }

    const std::pair<Value, VariableId>& root() const { return rule_.head; }
    const DeductionRule& rule() const { return rule_; }
    const std::vector<Ptr>& children() const { return children_; }
    bool is_fact() const { return children_.empty(); }

    /// Number of tree nodes, counting shared subtrees once per occurrence.
    int node_count() const {
        int n = 1;
        for (const Ptr& c : children_) n += c->node_count();
        return n;
    }

private:
    DeductionRule rule_;
    std::vector<Ptr> children_;
};

/// Rebuild the proof tree for the withdrawal of `e` from `y` recorded in the
/// trace. Children are the recorded justifications of the body pairs, whose
/// steps are strictly smaller than the root event's. Shared sub-proofs are
/// memoized per (value, variable).
inline Explanation explain_from_trace(const WithdrawalTrace& trace, Value e, VariableId y) {
    std::map<std::pair<Value, int>, Explanation::Ptr> memo;

    const std::function<Explanation::Ptr(Value, VariableId, int)> build =
        [&](Value v, VariableId x, int bound) -> Explanation::Ptr {
        const WithdrawalEvent* ev = trace.find(v, x);
        if (!ev)
            throw TraceError("recorded justification references a missing event");
        if (bound >= 0 && ev->step >= bound)
            throw TraceError("recorded justification does not precede its consequence");
        if (auto it = memo.find({v, x.index}); it != memo.end()) return it->second;
        std::vector<Explanation::Ptr> children;
        children.reserve(ev->deduction.body.size());
        for (const auto& [bv, bx] : ev->deduction.body)
            children.push_back(build(bv, bx, ev->step));
        auto node = std::make_shared<const Explanation>(ev->deduction, std::move(children));
        memo[{v, x.index}] = node;
        return node;
    };

    if (!trace.find(e, y))
        throw NotInTraceError("value " + std::to_string(e) +
                              " was not withdrawn from variable #" + std::to_string(y.index) +
                              " in this trace");
    return *build(e, y, -1);
}

/// Script that re-derives the explanation: the reversal of a breadth-first
/// ordering of its nodes. Replaying it from the initial domains withdraws
/// each node's value by that node's position, the root last. Every rule the
/// tree names must occur in the given rule set.
inline std::vector<RuleId> replay(const Explanation& expl, const CspModel& model,
                                  const std::vector<ReductionRule>& rules) {
    (void)model;
    std::vector<const Explanation*> bfs;
    std::deque<const Explanation*> queue{&expl};
    while (!queue.empty()) {
        const Explanation* node = queue.front();
        queue.pop_front();
        bfs.push_back(node);
        for (const Explanation::Ptr& c : node->children()) queue.push_back(c.get());
    }

    std::vector<RuleId> script;
    script.reserve(bfs.size());
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
        const RuleId& id = (*it)->rule().rule;
        const bool known = id.index >= 0 && static_cast<std::size_t>(id.index) < rules.size() &&
                           rules[static_cast<std::size_t>(id.index)].id == id;
        if (!known)
            throw InputError("explanation references unknown rule '" + id.label + "'");
        script.push_back(id);
    }
    return script;
}

/// Is the value absent from the downward closure? Equivalently: does any
/// explanation for (e, y) exist at all, whatever the iteration order.
inline bool explanation_exists(const CspModel& model, const std::vector<ReductionRule>& rules,
                               Value e, VariableId y) {
    if (!model.initial_domain(y).contains(e))
        throw InputError("value " + std::to_string(e) + " is not in the initial domain of '" +
                         model.name_of(y) + "'");
    return !simultaneous_closure(model, rules).at(y).contains(e);
}

namespace detail {

inline std::string pair_label(const CspModel& model, const std::pair<Value, VariableId>& p) {
    return "(" + std::to_string(p.first) + ", " + model.name_of(p.second) + ")";
}

inline void render_text_node(std::ostringstream& os, const CspModel& model,
                             const Explanation& node, int depth) {
    for (int i = 0; i < depth; ++i) os << "  ";
    os << pair_label(model, node.root()) << "  " << node.rule().name(model) << '\n';
    for (const Explanation::Ptr& c : node.children())
        render_text_node(os, model, *c, depth + 1);
}

inline int export_dot_node(std::ostringstream& os, const CspModel& model,
                           const Explanation& node, int& next_id) {
    const int id = next_id++;
    os << "  n" << id << " [label=\"" << pair_label(model, node.root()) << "\"];\n";
    for (const Explanation::Ptr& c : node.children()) {
        int child = export_dot_node(os, model, *c, next_id);
        os << "  n" << id << " -> n" << child << " [label=\"" << node.rule().name(model)
           << "\"];\n";
    }
    return id;
}

} // namespace detail

/// Indented tree rendering: two spaces per depth, node label then the name
/// of the deduction rule deriving it.
inline std::string render_text(const Explanation& expl, const CspModel& model) {
    std::ostringstream os;
    detail::render_text_node(os, model, expl, 0);
    return os.str();
}

/// Graphviz rendering of the proof tree. Node ids follow a preorder walk, so
/// the output is deterministic; shared sub-proofs are emitted once per
/// occurrence, keeping the graph a tree.
inline std::string export_dot(const Explanation& expl, const CspModel& model) {
    std::ostringstream os;
    os << "digraph explanation {\n";
    int next_id = 0;
    detail::export_dot_node(os, model, expl, next_id);
    os << "}\n";
    return os.str();
}

} // namespace fdprop

#endif // FDPROP_EXPLANATION_HPP
