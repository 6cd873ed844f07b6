#ifndef FDPROP_TESTS_HELPERS_HPP
#define FDPROP_TESTS_HELPERS_HPP

#include "fdprop/fdprop.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fdprop::testing {

// x < y, y < z, z < x over {0,1,2}. The rule labels follow the assembly
// contract: r1 reduces x from y, r2 reduces y from x, r3 reduces y from z,
// r4 reduces z from y, r5 reduces z from x, r6 reduces x from z.
inline CspModel triangle_model() {
    ValueSet d{0, 1, 2};
    return CspModel({"x", "y", "z"}, {d, d, d},
                    {ConstraintDef::less_than("c1", VariableId{0}, VariableId{1}),
                     ConstraintDef::less_than("c2", VariableId{1}, VariableId{2}),
                     ConstraintDef::less_than("c3", VariableId{2}, VariableId{0})});
}

// x <= y over {0,1} as an extensional table with three tuples.
inline CspModel leq_model() {
    VariableId x{0}, y{1};
    ValueSet d{0, 1};
    return CspModel({"x", "y"}, {d, d},
                    {ConstraintDef::table("c1", {x, y},
                                          {Tuple{{x, 0}, {y, 0}},
                                           Tuple{{x, 0}, {y, 1}},
                                           Tuple{{x, 1}, {y, 1}}})});
}

// x = y + z over {1,2,3}.
inline CspModel sum_model() {
    ValueSet d{1, 2, 3};
    return CspModel({"x", "y", "z"}, {d, d, d},
                    {ConstraintDef::sum3("c1", VariableId{0}, VariableId{1}, VariableId{2})});
}

/// Deterministic generator of small models: up to 4 variables with domains
/// of up to 4 values from -2..5, up to 4 constraints of any supported form.
class ModelGen {
public:
    explicit ModelGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t pick(std::uint64_t n) { return rng_() % n; }

    CspModel model() {
        const int nvars = 1 + static_cast<int>(pick(4));
        static const char* pool[] = {"a", "b", "c", "d"};
        std::vector<std::string> names;
        std::vector<ValueSet> domains;
        for (int i = 0; i < nvars; ++i) {
            names.emplace_back(pool[i]);
            ValueSet dom;
            const std::size_t want = 1 + pick(4);
            while (dom.size() < want) dom.insert(static_cast<Value>(pick(8)) - 2);
            domains.push_back(std::move(dom));
        }

        std::vector<ConstraintDef> constraints;
        const int ncons = static_cast<int>(pick(5));
        for (int k = 0; k < ncons; ++k) {
            std::string id = "c" + std::to_string(k + 1);
            int kind = static_cast<int>(pick(4));
            if (kind == 1 && nvars < 2) kind = 0;
            if (kind == 2 && nvars < 2) kind = 0;
            if (kind == 3 && nvars < 3) kind = 0;
            switch (kind) {
            case 1: {
                auto [x, y] = two_distinct(nvars);
                constraints.push_back(ConstraintDef::less_than(std::move(id), x, y));
                break;
            }
            case 2: {
                auto [x, y] = two_distinct(nvars);
                constraints.push_back(ConstraintDef::offset_eq(std::move(id), x, y,
                                                               static_cast<Value>(pick(5)) - 2));
                break;
            }
            case 3: {
                VariableId x = nth(nvars), y = nth(nvars), z = nth(nvars);
                while (y == x) y = nth(nvars);
                while (z == x || z == y) z = nth(nvars);
                constraints.push_back(ConstraintDef::sum3(std::move(id), x, y, z));
                break;
            }
            default: {
                const std::size_t arity =
                    1 + pick(static_cast<std::uint64_t>(std::min(nvars, 3)));
                std::vector<VariableId> scope;
                while (scope.size() < arity) {
                    VariableId x = nth(nvars);
                    bool seen = false;
                    for (VariableId s : scope) seen = seen || s == x;
                    if (!seen) scope.push_back(x);
                }
                std::vector<Tuple> tuples;
                enumerate_product(domains, scope, 0, Tuple{}, tuples);
                constraints.push_back(
                    ConstraintDef::table(std::move(id), std::move(scope), std::move(tuples)));
                break;
            }
            }
        }
        return CspModel(std::move(names), std::move(domains), std::move(constraints));
    }

    /// Random sub-family of the model's initial domains; domains may empty.
    DomainFamily family(const CspModel& m) {
        std::vector<ValueSet> doms;
        for (int i = 0; i < m.num_variables(); ++i) {
            ValueSet s;
            for (Value v : m.initial_domain(VariableId{i}))
                if (pick(2)) s.insert(v);
            doms.push_back(std::move(s));
        }
        return DomainFamily(std::move(doms));
    }

    /// Random extensional constraint over fresh variables, arity 1..3 with
    /// domains of up to 4 values: exercises the table rule constructor.
    CspModel table_only_model() {
        const int nvars = 1 + static_cast<int>(pick(3));
        static const char* pool[] = {"a", "b", "c"};
        std::vector<std::string> names;
        std::vector<ValueSet> domains;
        std::vector<VariableId> scope;
        for (int i = 0; i < nvars; ++i) {
            names.emplace_back(pool[i]);
            ValueSet dom;
            const std::size_t want = 1 + pick(4);
            while (dom.size() < want) dom.insert(static_cast<Value>(pick(6)) - 1);
            domains.push_back(std::move(dom));
            scope.push_back(VariableId{i});
        }
        std::vector<Tuple> tuples;
        enumerate_product(domains, scope, 0, Tuple{}, tuples);
        return CspModel(std::move(names), std::move(domains),
                        {ConstraintDef::table("c1", std::move(scope), std::move(tuples))});
    }

private:
    VariableId nth(int nvars) { return VariableId{static_cast<int>(pick(static_cast<std::uint64_t>(nvars)))}; }

    std::pair<VariableId, VariableId> two_distinct(int nvars) {
        VariableId x = nth(nvars), y = nth(nvars);
        while (y == x) y = nth(nvars);
        return {x, y};
    }

    void enumerate_product(const std::vector<ValueSet>& domains,
                           const std::vector<VariableId>& scope, std::size_t i, Tuple t,
                           std::vector<Tuple>& out) {
        if (i == scope.size()) {
            if (pick(2)) out.push_back(std::move(t));
            return;
        }
        for (Value v : domains[static_cast<std::size_t>(scope[i].index)]) {
            Tuple next = t;
            next.set(scope[i], v);
            enumerate_product(domains, scope, i + 1, std::move(next), out);
        }
    }

    std::mt19937_64 rng_;
};

/// The per-model rule set used throughout the randomized suites: odd seeds
/// take bounds rules where they exist, even seeds take full rules only.
inline std::vector<ReductionRule> corpus_rules(const CspModel& m, std::uint64_t seed) {
    return rules_for_model(m, seed % 2 ? RuleMode::Bounds : RuleMode::Full);
}

} // namespace fdprop::testing

#endif // FDPROP_TESTS_HELPERS_HPP
