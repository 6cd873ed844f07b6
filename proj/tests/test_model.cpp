#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fdprop;
using fdprop::testing::ModelGen;

TEST_SUITE_BEGIN("model");

TEST_CASE("is_solution checks every constraint") {
    CspModel m = fdprop::testing::leq_model();
    VariableId x = m.var("x"), y = m.var("y");

    CHECK(is_solution(m, Tuple{{x, 0}, {y, 1}}));
    CHECK_FALSE(is_solution(m, Tuple{{x, 1}, {y, 0}}));

    CspModel free_model({"x", "y"}, {ValueSet{0, 1}, ValueSet{0, 1}}, {});
    CHECK(is_solution(free_model, Tuple{{x, 1}, {y, 0}}));
}

TEST_CASE("is_solution rejects malformed tuples") {
    CspModel m = fdprop::testing::leq_model();
    VariableId x = m.var("x"), y = m.var("y");

    CHECK_THROWS_AS(is_solution(m, Tuple{{x, 0}}), InputError);
    CHECK_THROWS_AS(is_solution(m, Tuple{{x, 0}, {y, 7}}), InputError);
    CHECK_THROWS_AS(is_solution(m, Tuple{{x, 0}, {y, 0}, {VariableId{2}, 0}}), InputError);
}

TEST_CASE("enumerate_solutions on the worked examples") {
    CspModel triangle = fdprop::testing::triangle_model();
    CHECK(enumerate_solutions(triangle, triangle.initial_family()).empty());

    // Cross-check the brute force against a direct scan of all 27 tuples.
    int direct = 0;
    for (Value a = 0; a <= 2; ++a)
        for (Value b = 0; b <= 2; ++b)
            for (Value c = 0; c <= 2; ++c)
                if (a < b && b < c && c < a) ++direct;
    CHECK(direct == 0);

    CspModel leq = fdprop::testing::leq_model();
    VariableId x = leq.var("x"), y = leq.var("y");
    std::vector<Tuple> sols = enumerate_solutions(leq, leq.initial_family());
    REQUIRE(sols.size() == 3);
    CHECK(sols[0] == Tuple{{x, 0}, {y, 0}});
    CHECK(sols[1] == Tuple{{x, 0}, {y, 1}});
    CHECK(sols[2] == Tuple{{x, 1}, {y, 1}});

    DomainFamily cut = leq.initial_family();
    cut.at(y) = ValueSet{};
    CHECK(enumerate_solutions(leq, cut).empty());
}

TEST_CASE("family_leq basics") {
    DomainFamily a(std::vector<ValueSet>{{0}, {0, 1}});
    DomainFamily b(std::vector<ValueSet>{{0, 1}, {0, 1}});
    DomainFamily c(std::vector<ValueSet>{{2}, {0, 1}});

    CHECK(family_leq(a, a));
    CHECK(family_leq(a, b));
    CHECK_FALSE(family_leq(c, b));
    CHECK_THROWS_AS(family_leq(a, DomainFamily(std::vector<ValueSet>{{0}})), InputError);
}

TEST_CASE("family_leq is a partial order on random families") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        ModelGen gen(seed);
        CspModel m = gen.model();
        DomainFamily a = gen.family(m), b = gen.family(m), c = gen.family(m);

        CHECK(family_leq(a, a));
        if (family_leq(a, b) && family_leq(b, a)) CHECK(a == b);
        if (family_leq(a, b) && family_leq(b, c)) CHECK(family_leq(a, c));
    }
}

TEST_CASE("solutions restrict into every constraint relation") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        CspModel m = ModelGen(seed).model();
        for (const Tuple& t : enumerate_solutions(m, m.initial_family()))
            for (const ConstraintDef& c : m.constraints()) {
                auto rel = materialize_relation(m, c);
                Tuple r = t.restrict_to(c.scope);
                CHECK(std::binary_search(rel.begin(), rel.end(), r));
            }
    }
}

TEST_CASE("enumerate_solutions is monotone in the family") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        ModelGen gen(seed);
        CspModel m = gen.model();
        DomainFamily b = gen.family(m);
        DomainFamily a = b;
        // Shrink a below b.
        for (int i = 0; i < m.num_variables(); ++i) {
            ValueSet s;
            for (Value v : a.at(VariableId{i}))
                if (gen.pick(2)) s.insert(v);
            a.at(VariableId{i}) = std::move(s);
        }
        REQUIRE(family_leq(a, b));
        std::vector<Tuple> sa = enumerate_solutions(m, a);
        std::vector<Tuple> sb = enumerate_solutions(m, b);
        for (const Tuple& t : sa) CHECK(std::binary_search(sb.begin(), sb.end(), t));
    }
}

TEST_CASE("model invariants are enforced at construction") {
    ValueSet d{0, 1};
    CHECK_THROWS_AS(CspModel({"x"}, {ValueSet{}}, {}), InputError);
    CHECK_THROWS_AS(CspModel({"x", "x"}, {d, d}, {}), InputError);
    CHECK_THROWS_AS(CspModel({"x"}, {d}, {ConstraintDef::less_than("c1", VariableId{0}, VariableId{1})}),
                    InputError);
    CHECK_THROWS_AS(CspModel({"x"}, {d}, {ConstraintDef::less_than("c1", VariableId{0}, VariableId{0})}),
                    InputError);
    // Table value outside the initial domain.
    VariableId x{0}, y{1};
    CHECK_THROWS_AS(CspModel({"x", "y"}, {d, d},
                             {ConstraintDef::table("c1", {x, y}, {Tuple{{x, 0}, {y, 9}}})}),
                    InputError);
}

TEST_SUITE_END();
