#ifndef FDPROP_MODEL_HPP
#define FDPROP_MODEL_HPP

#include "fdprop/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdprop {

/// Domain values are plain machine integers.
using Value = std::int64_t;

/// Index of a variable within its model. Names live on the model.
struct VariableId {
    int index = -1;

    friend constexpr bool operator==(VariableId, VariableId) = default;
    friend constexpr auto operator<=>(VariableId, VariableId) = default;
};

/// A finite set of values, kept sorted and unique. Iteration order is always
/// ascending, which every deterministic output in the engine relies on.
class ValueSet {
public:
    ValueSet() = default;
    ValueSet(std::initializer_list<Value> vs) : vals_(vs) { normalize(); }
    explicit ValueSet(std::vector<Value> vs) : vals_(std::move(vs)) { normalize(); }

    bool contains(Value v) const {
        return std::binary_search(vals_.begin(), vals_.end(), v);
    }
    bool empty() const { return vals_.empty(); }
    std::size_t size() const { return vals_.size(); }

    void insert(Value v) {
        auto it = std::lower_bound(vals_.begin(), vals_.end(), v);
        if (it == vals_.end() || *it != v) vals_.insert(it, v);
    }

    bool subset_of(const ValueSet& other) const {
        return std::includes(other.vals_.begin(), other.vals_.end(),
                             vals_.begin(), vals_.end());
    }

    ValueSet intersect(const ValueSet& other) const {
        std::vector<Value> out;
        std::set_intersection(vals_.begin(), vals_.end(),
                              other.vals_.begin(), other.vals_.end(),
                              std::back_inserter(out));
        ValueSet r;
        r.vals_ = std::move(out);
        return r;
    }

    const std::vector<Value>& values() const { return vals_; }
    auto begin() const { return vals_.begin(); }
    auto end() const { return vals_.end(); }

    Value min() const { return vals_.front(); }
    Value max() const { return vals_.back(); }

    friend bool operator==(const ValueSet&, const ValueSet&) = default;

private:
    void normalize() {
        std::sort(vals_.begin(), vals_.end());
        vals_.erase(std::unique(vals_.begin(), vals_.end()), vals_.end());
    }

    std::vector<Value> vals_;
};

/// An assignment of one value per variable of some scope. Entries are kept
/// sorted by variable index, so comparisons are lexicographic in that order.
class Tuple {
public:
    Tuple() = default;
    Tuple(std::initializer_list<std::pair<VariableId, Value>> entries) {
        for (const auto& [x, v] : entries) set(x, v);
    }

    void set(VariableId x, Value v) {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                   [](const auto& e, VariableId id) { return e.first < id; });
        if (it != entries_.end() && it->first == x)
            it->second = v;
        else
            entries_.insert(it, {x, v});
    }

    bool has(VariableId x) const { return find(x) != nullptr; }

    std::optional<Value> get(VariableId x) const {
        const auto* e = find(x);
        return e ? std::optional<Value>(e->second) : std::nullopt;
    }

    Value at(VariableId x) const {
        const auto* e = find(x);
        if (!e) throw InputError("tuple has no entry for variable #" + std::to_string(x.index));
        return e->second;
    }

    Tuple restrict_to(const std::vector<VariableId>& scope) const {
        Tuple out;
        for (VariableId x : scope) out.set(x, at(x));
        return out;
    }

    std::size_t arity() const { return entries_.size(); }
    const std::vector<std::pair<VariableId, Value>>& entries() const { return entries_; }

    friend bool operator==(const Tuple&, const Tuple&) = default;
    friend auto operator<=>(const Tuple& a, const Tuple& b) {
        return a.entries_ <=> b.entries_;
    }

private:
    const std::pair<VariableId, Value>* find(VariableId x) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                   [](const auto& e, VariableId id) { return e.first < id; });
        if (it != entries_.end() && it->first == x) return &*it;
        return nullptr;
    }

    std::vector<std::pair<VariableId, Value>> entries_;
};

enum class RelationKind {
    Table,    ///< explicit finite set of tuples over the scope
    LessThan, ///< scope[0] < scope[1]
    OffsetEq, ///< scope[0] = scope[1] + offset
    Sum3,     ///< scope[0] = scope[1] + scope[2]
};

/// One constraint: an identifier, an ordered scope, and a relation that is
/// either an explicit table or a named closed form.
struct ConstraintDef {
    std::string id;
    std::vector<VariableId> scope;
    RelationKind kind = RelationKind::Table;
    std::vector<Tuple> tuples; ///< Table only; sorted and unique
    Value offset = 0;          ///< OffsetEq only

    static ConstraintDef table(std::string id, std::vector<VariableId> scope,
                               std::vector<Tuple> tuples) {
        ConstraintDef c;
        c.id = std::move(id);
        c.scope = std::move(scope);
        c.kind = RelationKind::Table;
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
        c.tuples = std::move(tuples);
        return c;
    }
    static ConstraintDef less_than(std::string id, VariableId x, VariableId y) {
        return {std::move(id), {x, y}, RelationKind::LessThan, {}, 0};
    }
    static ConstraintDef offset_eq(std::string id, VariableId x, VariableId y, Value c) {
        return {std::move(id), {x, y}, RelationKind::OffsetEq, {}, c};
    }
    static ConstraintDef sum3(std::string id, VariableId x, VariableId y, VariableId z) {
        return {std::move(id), {x, y, z}, RelationKind::Sum3, {}, 0};
    }

    std::size_t arity() const { return scope.size(); }

    /// Does a tuple covering the scope satisfy this relation?
    bool holds(const Tuple& t) const {
        switch (kind) {
        case RelationKind::Table: {
            Tuple r = t.restrict_to(scope);
            return std::binary_search(tuples.begin(), tuples.end(), r);
        }
        case RelationKind::LessThan:
            return t.at(scope[0]) < t.at(scope[1]);
        case RelationKind::OffsetEq:
            return t.at(scope[0]) == t.at(scope[1]) + offset;
        case RelationKind::Sum3:
            return t.at(scope[0]) == t.at(scope[1]) + t.at(scope[2]);
        }
        return false;
    }

    friend bool operator==(const ConstraintDef&, const ConstraintDef&) = default;
};

/// One element of the search space: a per-variable set of still-possible
/// values, indexed like the model's variable list.
class DomainFamily {
public:
    DomainFamily() = default;
    explicit DomainFamily(std::vector<ValueSet> domains) : domains_(std::move(domains)) {}

    int size() const { return static_cast<int>(domains_.size()); }

    const ValueSet& at(VariableId x) const {
        check(x);
        return domains_[static_cast<std::size_t>(x.index)];
    }
    ValueSet& at(VariableId x) {
        check(x);
        return domains_[static_cast<std::size_t>(x.index)];
    }

    /// First variable (by index) whose domain is empty, if any.
    std::optional<VariableId> first_empty() const {
        for (int i = 0; i < size(); ++i)
            if (domains_[static_cast<std::size_t>(i)].empty()) return VariableId{i};
        return std::nullopt;
    }

    friend bool operator==(const DomainFamily&, const DomainFamily&) = default;

private:
    void check(VariableId x) const {
        if (x.index < 0 || x.index >= size())
            throw InputError("variable #" + std::to_string(x.index) + " outside family");
    }

    std::vector<ValueSet> domains_;
};

/// A constraint satisfaction problem: named variables, their finite initial
/// domains, and a list of constraints. Immutable once constructed; the
/// constructor enforces the structural invariants.
class CspModel {
public:
    CspModel(std::vector<std::string> variable_names,
             std::vector<ValueSet> initial_domains,
             std::vector<ConstraintDef> constraints)
        : names_(std::move(variable_names)),
          domains_(std::move(initial_domains)),
          constraints_(std::move(constraints)) {
        validate();
    }

    int num_variables() const { return static_cast<int>(names_.size()); }

    std::optional<VariableId> find_var(std::string_view name) const {
        for (int i = 0; i < num_variables(); ++i)
            if (names_[static_cast<std::size_t>(i)] == name) return VariableId{i};
        return std::nullopt;
    }

    VariableId var(std::string_view name) const {
        if (auto v = find_var(name)) return *v;
        throw InputError("unknown variable '" + std::string(name) + "'");
    }

    const std::string& name_of(VariableId x) const {
        if (x.index < 0 || x.index >= num_variables())
            throw InputError("variable #" + std::to_string(x.index) + " outside model");
        return names_[static_cast<std::size_t>(x.index)];
    }

    const ValueSet& initial_domain(VariableId x) const {
        if (x.index < 0 || x.index >= num_variables())
            throw InputError("variable #" + std::to_string(x.index) + " outside model");
        return domains_[static_cast<std::size_t>(x.index)];
    }

    const std::vector<ConstraintDef>& constraints() const { return constraints_; }
    const std::vector<std::string>& variable_names() const { return names_; }

    DomainFamily initial_family() const { return DomainFamily(domains_); }

    friend bool operator==(const CspModel&, const CspModel&) = default;

private:
    void validate() const {
        if (names_.size() != domains_.size())
            throw InputError("one initial domain required per variable");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (domains_[i].empty())
                throw InputError("variable '" + names_[i] + "' has an empty initial domain");
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw InputError("duplicate variable name '" + names_[i] + "'");
        }
        for (const ConstraintDef& c : constraints_) {
            if (c.scope.empty())
                throw InputError("constraint '" + c.id + "' has an empty scope");
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                VariableId x = c.scope[i];
                if (x.index < 0 || x.index >= num_variables())
                    throw InputError("constraint '" + c.id + "' names a variable outside the model");
                for (std::size_t j = i + 1; j < c.scope.size(); ++j)
                    if (c.scope[j] == x)
                        throw InputError("constraint '" + c.id + "' repeats a scope variable");
            }
            std::size_t want = c.kind == RelationKind::Sum3       ? 3
                               : c.kind == RelationKind::LessThan ? 2
                               : c.kind == RelationKind::OffsetEq ? 2
                                                                  : c.scope.size();
            if (c.arity() != want)
                throw InputError("constraint '" + c.id + "' has the wrong arity");
            for (const Tuple& t : c.tuples) {
                if (t.arity() != c.scope.size())
                    throw InputError("table tuple arity mismatch in '" + c.id + "'");
                for (VariableId x : c.scope) {
                    auto v = t.get(x);
                    if (!v)
                        throw InputError("table tuple in '" + c.id + "' misses a scope variable");
                    if (!initial_domain(x).contains(*v))
                        throw InputError("table tuple value outside the domain of '" +
                                         name_of(x) + "' in '" + c.id + "'");
                }
            }
        }
    }

    std::vector<std::string> names_;
    std::vector<ValueSet> domains_;
    std::vector<ConstraintDef> constraints_;
};

/// Pointwise inclusion of domain families over the same variable set.
inline bool family_leq(const DomainFamily& a, const DomainFamily& b) {
    if (a.size() != b.size())
        throw InputError("family_leq over mismatched variable sets");
    for (int i = 0; i < a.size(); ++i)
        if (!a.at(VariableId{i}).subset_of(b.at(VariableId{i}))) return false;
    return true;
}

namespace detail {

inline void check_full_assignment(const CspModel& model, const Tuple& t) {
    if (t.arity() != static_cast<std::size_t>(model.num_variables()))
        throw InputError("tuple does not assign exactly the model variables");
    for (int i = 0; i < model.num_variables(); ++i) {
        VariableId x{i};
        auto v = t.get(x);
        if (!v) throw InputError("tuple misses variable '" + model.name_of(x) + "'");
        if (!model.initial_domain(x).contains(*v))
            throw InputError("tuple value for '" + model.name_of(x) +
                             "' outside its initial domain");
    }
}

} // namespace detail

/// True iff the full assignment satisfies every constraint of the model.
inline bool is_solution(const CspModel& model, const Tuple& t) {
    detail::check_full_assignment(model, t);
    for (const ConstraintDef& c : model.constraints())
        if (!c.holds(t)) return false;
    return true;
}

/// Brute-force solution enumeration within the given family. Serves as the
/// oracle everything else is checked against. Output is in lexicographic
/// order (variable index, then value).
inline std::vector<Tuple> enumerate_solutions(const CspModel& model,
                                              const DomainFamily& within) {
    if (within.size() != model.num_variables())
        throw InputError("family does not match the model's variables");
    std::vector<Tuple> out;
    for (int i = 0; i < model.num_variables(); ++i)
        if (within.at(VariableId{i}).empty()) return out;

    const int n = model.num_variables();
    std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
    while (true) {
        Tuple t;
        for (int i = 0; i < n; ++i) {
            VariableId x{i};
            t.set(x, within.at(x).values()[cursor[static_cast<std::size_t>(i)]]);
        }
        bool ok = true;
        for (const ConstraintDef& c : model.constraints())
            if (!c.holds(t)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(std::move(t));

        int i = n - 1;
        for (; i >= 0; --i) {
            auto& k = cursor[static_cast<std::size_t>(i)];
            if (++k < within.at(VariableId{i}).size()) break;
            k = 0;
        }
        if (i < 0) break;
    }
    return out;
}

/// All tuples of the scope's initial-domain product that satisfy the
/// constraint. Used by the oracle-side checks; the propagation engine never
/// calls this for intensional forms.
inline std::vector<Tuple> materialize_relation(const CspModel& model,
                                               const ConstraintDef& c) {
    if (c.kind == RelationKind::Table) return c.tuples;
    std::vector<Tuple> out;
    const std::size_t n = c.scope.size();
    std::vector<std::size_t> cursor(n, 0);
    bool done = false;
    while (!done) {
        Tuple t;
        for (std::size_t i = 0; i < n; ++i)
            t.set(c.scope[i], model.initial_domain(c.scope[i]).values()[cursor[i]]);
        if (c.holds(t)) out.push_back(std::move(t));

        done = true;
        for (std::size_t i = n; i-- > 0;) {
            if (++cursor[i] < model.initial_domain(c.scope[i]).size()) {
                done = false;
                break;
            }
            cursor[i] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fdprop

#endif // FDPROP_MODEL_HPP
