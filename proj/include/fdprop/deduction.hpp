#ifndef FDPROP_DEDUCTION_HPP
#define FDPROP_DEDUCTION_HPP

#include "fdprop/rules.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdprop {

/// Looks up the step at which (value, variable) was withdrawn, if ever.
using WithdrawalLookup = std::function<std::optional<int>(Value, VariableId)>;

/// One instantiated deduction rule: "if every body pair is withdrawn, the
/// head value is withdrawn from the head variable". An empty body is a fact.
struct DeductionRule {
    Value value = 0; ///< the withdrawn value e
    RuleId rule;
    int arc_index = 0; ///< which support function of the rule
    int arc_count = 1; ///< how many support functions the rule has
    std::pair<Value, VariableId> head;
    std::vector<std::pair<Value, VariableId>> body; ///< sorted, unique
    /// Hyper-arc only: the input variable chosen per support tuple, in the
    /// support function's enumeration order. Empty for single-input rules.
    std::vector<VariableId> choice;

    bool is_fact() const { return body.empty(); }

    /// Deterministic display name: "(e, r3)", "(e, r3, arc2)" when the rule
    /// has several support functions, with ", t:x,y" appended for hyper-arc
    /// choices.
    std::string name(const CspModel& model) const {
        std::string s = "(" + std::to_string(value) + ", " + rule.label;
        if (arc_count > 1) s += ", arc" + std::to_string(arc_index + 1);
        if (!choice.empty()) {
            s += ", t:";
            for (std::size_t i = 0; i < choice.size(); ++i) {
                if (i) s += ",";
                s += model.name_of(choice[i]);
            }
        }
        return s + ")";
    }

    friend bool operator==(const DeductionRule&, const DeductionRule&) = default;
};

/// Instantiate the deduction rule justifying the removal of `e` through the
/// given support function. Single-input rules take the whole support set as
/// body; hyper-arc rules pick, per lost support tuple, the input variable
/// whose value was withdrawn first (ties broken by variable index).
///
/// Every support tuple must have at least one withdrawn component in the
/// trace; anything else means the event could not have happened.
inline DeductionRule deduction_instance(const ReductionRule& rule, Value e, int arc_index,
                                        const WithdrawalLookup& withdrawn_step) {
    if (arc_index < 0 || static_cast<std::size_t>(arc_index) >= rule.arcs.size())
        throw InputError("support function index out of range");

    DeductionRule ded;
    ded.value = e;
    ded.rule = rule.id;
    ded.arc_index = arc_index;
    ded.arc_count = static_cast<int>(rule.arcs.size());
    ded.head = {e, rule.out_var};

    const bool hyper = rule.in_vars.size() > 1;
    for (const Tuple& f : rule.arcs[static_cast<std::size_t>(arc_index)](e)) {
        if (!hyper) {
            VariableId in = rule.in_vars.front();
            Value fv = f.at(in);
            if (!withdrawn_step(fv, in))
                throw TraceError("support value was never withdrawn");
            ded.body.emplace_back(fv, in);
        } else {
            std::optional<int> best_step;
            VariableId best_var;
            Value best_val = 0;
            for (VariableId x : rule.in_vars) {
                Value fx = f.at(x);
                if (auto step = withdrawn_step(fx, x);
                    step && (!best_step || *step < *best_step)) {
                    best_step = step;
                    best_var = x;
                    best_val = fx;
                }
            }
            if (!best_step)
                throw TraceError("support tuple has no withdrawn component");
            ded.choice.push_back(best_var);
            ded.body.emplace_back(best_val, best_var);
        }
    }
    std::sort(ded.body.begin(), ded.body.end());
    ded.body.erase(std::unique(ded.body.begin(), ded.body.end()), ded.body.end());
    return ded;
}

/// All deduction bodies obtainable from the support function by any choice
/// of input variable per support tuple. For single-input rules this is the
/// one body the binary form defines. Bodies come back sorted and distinct.
inline std::vector<std::vector<std::pair<Value, VariableId>>>
enumerate_deduction_bodies(const ReductionRule& rule, Value e, int arc_index) {
    if (arc_index < 0 || static_cast<std::size_t>(arc_index) >= rule.arcs.size())
        throw InputError("support function index out of range");
    const std::vector<Tuple> supports = rule.arcs[static_cast<std::size_t>(arc_index)](e);

    std::vector<std::vector<std::pair<Value, VariableId>>> bodies;
    if (rule.in_vars.size() <= 1) {
        std::vector<std::pair<Value, VariableId>> body;
        VariableId in = rule.in_vars.front();
        for (const Tuple& f : supports) body.emplace_back(f.at(in), in);
        std::sort(body.begin(), body.end());
        body.erase(std::unique(body.begin(), body.end()), body.end());
        bodies.push_back(std::move(body));
        return bodies;
    }

    const std::size_t n = supports.size();
    std::vector<std::size_t> pick(n, 0);
    bool done = false;
    while (!done) {
        std::vector<std::pair<Value, VariableId>> body;
        for (std::size_t i = 0; i < n; ++i) {
            VariableId x = rule.in_vars[pick[i]];
            body.emplace_back(supports[i].at(x), x);
        }
        std::sort(body.begin(), body.end());
        body.erase(std::unique(body.begin(), body.end()), body.end());
        bodies.push_back(std::move(body));

        done = true;
        for (std::size_t i = n; i-- > 0;) {
            if (++pick[i] < rule.in_vars.size()) {
                done = false;
                break;
            }
            pick[i] = 0;
        }
    }
    std::sort(bodies.begin(), bodies.end());
    bodies.erase(std::unique(bodies.begin(), bodies.end()), bodies.end());
    return bodies;
}

} // namespace fdprop

#endif // FDPROP_DEDUCTION_HPP
