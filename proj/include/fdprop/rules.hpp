#ifndef FDPROP_RULES_HPP
#define FDPROP_RULES_HPP

#include "fdprop/model.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fdprop {

struct RuleId {
    int index = -1;    ///< position in the assembled rule list
    std::string label; ///< "r1", "r2", ... per the naming contract

    friend bool operator==(const RuleId&, const RuleId&) = default;
};

/// A support function: maps a candidate value of the output variable to the
/// set of input tuples that justify keeping it. For single-input rules the
/// tuples have arity one. Must be deterministic, side-effect free, and only
/// return tuples within the inputs' initial domains.
using SupportFn = std::function<std::vector<Tuple>(Value)>;

/// A reduction rule of type (in_vars ∪ {out_var}, out_var): keeps a value of
/// out_var iff every support function still has a surviving input tuple.
/// Monotonic and contractant by construction of the support semantics.
struct ReductionRule {
    RuleId id;
    std::vector<VariableId> in_vars; ///< sorted, non-empty
    VariableId out_var;
    std::vector<SupportFn> arcs; ///< non-empty
    std::string origin;          ///< id of the constraint this rule implements
};

struct RemovedValue {
    Value value;
    int arc_index; ///< first support function (in declaration order) with no survivor
};

struct ReductionOutcome {
    ValueSet new_domain;
    std::vector<RemovedValue> removed;
};

namespace detail {

inline bool tuple_survives(const Tuple& f, const DomainFamily& d) {
    for (const auto& [x, v] : f.entries())
        if (!d.at(x).contains(v)) return false;
    return true;
}

} // namespace detail

/// Evaluate one rule against the current family. Keeps exactly the values of
/// d[out_var] whose every support function has a surviving tuple; each
/// removal is tagged with the first exhausted support function.
inline ReductionOutcome apply_rule(const ReductionRule& rule, const DomainFamily& d) {
    ReductionOutcome out;
    for (Value e : d.at(rule.out_var)) {
        int exhausted = -1;
        for (std::size_t a = 0; a < rule.arcs.size(); ++a) {
            bool supported = false;
            for (const Tuple& f : rule.arcs[a](e))
                if (detail::tuple_survives(f, d)) {
                    supported = true;
                    break;
                }
            if (!supported) {
                exhausted = static_cast<int>(a);
                break;
            }
        }
        if (exhausted < 0)
            out.new_domain.insert(e);
        else
            out.removed.push_back({e, exhausted});
    }
    return out;
}

/// Lift of apply_rule to the whole family: only the output variable changes.
inline DomainFamily reduce_operator(const ReductionRule& rule, const DomainFamily& d) {
    DomainFamily next = d;
    next.at(rule.out_var) = apply_rule(rule, d).new_domain;
    return next;
}

enum class RuleMode {
    Full,   ///< keep exactly the values with a support in the relation
    Bounds, ///< interval reasoning; defined for OffsetEq only
};

namespace detail {

inline std::vector<VariableId> sorted_without(const std::vector<VariableId>& scope,
                                              VariableId skip) {
    std::vector<VariableId> out;
    for (VariableId x : scope)
        if (!(x == skip)) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

inline SupportFn filtered_values(ValueSet domain, VariableId in,
                                 std::function<bool(Value, Value)> accept) {
    return [domain = std::move(domain), in, accept = std::move(accept)](Value e) {
        std::vector<Tuple> supports;
        for (Value f : domain)
            if (accept(e, f)) supports.push_back(Tuple{{in, f}});
        return supports;
    };
}

/// Precomputed support table for one output variable of an extensional
/// constraint: value of the output -> tuples over the remaining scope.
inline SupportFn table_supports(const CspModel& model, const ConstraintDef& c,
                                VariableId out) {
    auto table = std::make_shared<std::map<Value, std::vector<Tuple>>>();
    const std::vector<VariableId> ins = sorted_without(c.scope, out);
    if (ins.empty()) {
        // Unary table: the value supports itself iff the relation allows it.
        for (const Tuple& t : c.tuples)
            (*table)[t.at(out)].push_back(t);
    } else {
        for (const Tuple& t : c.tuples)
            (*table)[t.at(out)].push_back(t.restrict_to(ins));
    }
    for (auto& [e, supports] : *table) {
        std::sort(supports.begin(), supports.end());
        supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
    }
    (void)model;
    return [table](Value e) {
        auto it = table->find(e);
        return it == table->end() ? std::vector<Tuple>{} : it->second;
    };
}

inline SupportFn sum_supports(ValueSet da, VariableId a, ValueSet db, VariableId b,
                              std::function<bool(Value, Value, Value)> accept) {
    return [da = std::move(da), a, db = std::move(db), b,
            accept = std::move(accept)](Value e) {
        std::vector<Tuple> supports;
        for (Value fa : da)
            for (Value fb : db)
                if (accept(e, fa, fb)) supports.push_back(Tuple{{a, fa}, {b, fb}});
        return supports;
    };
}

} // namespace detail

/// Build the reduction rules implementing one constraint: one rule per scope
/// variable as output, in scope order. Full mode derives supports from the
/// relation; Bounds mode keeps only interval endpoints reachable and exists
/// for OffsetEq alone.
inline std::vector<ReductionRule> rules_for_constraint(const CspModel& model,
                                                       const ConstraintDef& c,
                                                       RuleMode mode) {
    std::vector<ReductionRule> rules;
    const auto dom = [&](VariableId x) { return model.initial_domain(x); };

    if (mode == RuleMode::Bounds) {
        if (c.kind != RelationKind::OffsetEq)
            throw ConfigError("bounds rules are only defined for offset constraints");
        VariableId x = c.scope[0], y = c.scope[1];
        const Value k = c.offset;
        // x = y + k, so x ranges over min(y)+k .. max(y)+k and conversely.
        rules.push_back({{},
                         {y},
                         x,
                         {detail::filtered_values(dom(y), y, [k](Value e, Value f) { return f + k <= e; }),
                          detail::filtered_values(dom(y), y, [k](Value e, Value f) { return e <= f + k; })},
                         c.id});
        rules.push_back({{},
                         {x},
                         y,
                         {detail::filtered_values(dom(x), x, [k](Value e, Value f) { return f - k <= e; }),
                          detail::filtered_values(dom(x), x, [k](Value e, Value f) { return e <= f - k; })},
                         c.id});
        return rules;
    }

    switch (c.kind) {
    case RelationKind::LessThan: {
        VariableId x = c.scope[0], y = c.scope[1];
        rules.push_back({{}, {y}, x,
                         {detail::filtered_values(dom(y), y, [](Value e, Value f) { return e < f; })},
                         c.id});
        rules.push_back({{}, {x}, y,
                         {detail::filtered_values(dom(x), x, [](Value e, Value f) { return f < e; })},
                         c.id});
        break;
    }
    case RelationKind::OffsetEq: {
        VariableId x = c.scope[0], y = c.scope[1];
        const Value k = c.offset;
        rules.push_back({{}, {y}, x,
                         {detail::filtered_values(dom(y), y, [k](Value e, Value f) { return e == f + k; })},
                         c.id});
        rules.push_back({{}, {x}, y,
                         {detail::filtered_values(dom(x), x, [k](Value e, Value f) { return f == e + k; })},
                         c.id});
        break;
    }
    case RelationKind::Sum3: {
        VariableId x = c.scope[0], y = c.scope[1], z = c.scope[2];
        rules.push_back({{}, detail::sorted_without(c.scope, x), x,
                         {detail::sum_supports(dom(y), y, dom(z), z,
                                                [](Value e, Value fy, Value fz) { return e == fy + fz; })},
                         c.id});
        rules.push_back({{}, detail::sorted_without(c.scope, y), y,
                         {detail::sum_supports(dom(x), x, dom(z), z,
                                                [](Value e, Value fx, Value fz) { return fx == e + fz; })},
                         c.id});
        rules.push_back({{}, detail::sorted_without(c.scope, z), z,
                         {detail::sum_supports(dom(x), x, dom(y), y,
                                                [](Value e, Value fx, Value fy) { return fx == e + fy; })},
                         c.id});
        break;
    }
    case RelationKind::Table: {
        for (VariableId out : c.scope) {
            std::vector<VariableId> ins = detail::sorted_without(c.scope, out);
            // A unary table degenerates to a self-supporting rule of type
            // ({x}, x): arc(e) = {e} when the relation allows e, else empty.
            if (ins.empty()) ins = {out};
            rules.push_back({{}, std::move(ins), out,
                             {detail::table_supports(model, c, out)}, c.id});
        }
        break;
    }
    }
    return rules;
}

/// Assemble the rule set for a whole model and assign the deterministic
/// labels r1, r2, ...: constraints in declaration order, output variables in
/// scope order within each constraint. Bounds mode applies to the constraint
/// forms that define it (OffsetEq) and falls back to Full elsewhere.
inline std::vector<ReductionRule> rules_for_model(const CspModel& model, RuleMode mode) {
    std::vector<ReductionRule> rules;
    for (const ConstraintDef& c : model.constraints()) {
        RuleMode m = mode;
        if (m == RuleMode::Bounds && c.kind != RelationKind::OffsetEq) m = RuleMode::Full;
        for (ReductionRule& r : rules_for_constraint(model, c, m))
            rules.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < rules.size(); ++i)
        rules[i].id = {static_cast<int>(i), "r" + std::to_string(i + 1)};
    return rules;
}

inline const ReductionRule* find_rule(const std::vector<ReductionRule>& rules,
                                      std::string_view label) {
    for (const ReductionRule& r : rules)
        if (r.id.label == label) return &r;
    return nullptr;
}

namespace detail {

/// Family assigning {t_x} to every rule variable and the full initial domain
/// elsewhere; evaluating the rule on it realizes the singleton check.
inline DomainFamily singleton_family(const CspModel& model, const ReductionRule& rule,
                                     const Tuple& t) {
    DomainFamily d = model.initial_family();
    for (VariableId x : rule.in_vars) d.at(x) = ValueSet{t.at(x)};
    d.at(rule.out_var) = ValueSet{t.at(rule.out_var)};
    return d;
}

} // namespace detail

/// Does the rule keep the projection of every tuple of the constraint's
/// relation when run on the matching singleton domains?
inline bool check_correct_wrt_constraint(const CspModel& model, const ReductionRule& rule,
                                         const ConstraintDef& c) {
    for (const Tuple& t : materialize_relation(model, c)) {
        DomainFamily d = detail::singleton_family(model, rule, t);
        if (apply_rule(rule, d).new_domain != ValueSet{t.at(rule.out_var)}) return false;
    }
    return true;
}

/// Does the rule keep the projection of every model solution? Quantifies the
/// singleton check over the brute-force solution set.
inline bool check_correct(const CspModel& model, const ReductionRule& rule) {
    for (const Tuple& t : enumerate_solutions(model, model.initial_family())) {
        DomainFamily d = detail::singleton_family(model, rule, t);
        if (apply_rule(rule, d).new_domain != ValueSet{t.at(rule.out_var)}) return false;
    }
    return true;
}

} // namespace fdprop

#endif // FDPROP_RULES_HPP
