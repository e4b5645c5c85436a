#include <doctest.h>

#include "klim/bicx.hpp"
#include "klim/gprod.hpp"

using namespace klim;

namespace {

LimitIndex B(std::vector<ElementSet> m)
{
    return limit_index(std::move(m));
}

// sign of the merge permutation, counted by brute force over pairs
int merge_sign(const ElementSet& x, const ElementSet& y)
{
    int inv = 0;
    for (int a : x)
        for (int b : y)
            if (a > b)
                ++inv;
    return inv % 2 ? -1 : 1;
}

} // namespace

TEST_SUITE("gprod")
{
    TEST_CASE("compatibility")
    {
        CHECK(compatible(B({{1, 2}, {1, 3}}), B({{4}, {5}})).compatible);
        CHECK(compatible(B({{1, 2}, {1, 3}}), B({{4}, {5}})).reason == CompatReason::size_match_and_disjoint);
        CHECK(compatible(LimitIndex(), B({{1, 2}})).reason == CompatReason::empty_operand);
        CHECK(compatible(B({{1, 2}}), B({{3}, {4}})).reason == CompatReason::size_mismatch);
        CHECK(compatible(B({{1, 2}, {1, 3}}), B({{2, 4}, {2, 5}})).reason == CompatReason::union_overlap);
    }

    TEST_CASE("uplus pairs members in canonical order")
    {
        CHECK(uplus(B({{1, 2}, {1, 3}}), B({{4}, {5}})) ==
              ComplementFamily(std::vector<ElementSet>{{1, 2, 4}, {1, 3, 5}}));
        CHECK_THROWS_AS(uplus(B({{1}}), B({{1}})), InvalidInput);
    }

    TEST_CASE("product sign and unit")
    {
        const LimitIndex a = B({{3, 4}});
        const LimitIndex b = B({{1, 2}});
        CHECK(product_sign_count(a, b) == 4);
        CHECK(gproduct(a, b) == LimitChain(B({{1, 2, 3, 4}})));
        CHECK(gproduct(B({{2, 3}}), B({{1}})) == LimitChain(B({{1, 2, 3}})));
        CHECK(gproduct(B({{2}}), B({{1}})) == LimitChain(B({{1, 2}}), Rational(-1)));
        CHECK(gproduct(LimitIndex(), a) == LimitChain(a));
        CHECK(gproduct(a, LimitIndex()) == LimitChain(a));
        CHECK(gproduct(B({{1}}), B({{1}})).is_zero());
        // the (-1)-simplex is not the unit
        const LimitIndex empty_member = B({{}});
        CHECK(gproduct(empty_member, B({{1}})) == LimitChain(B({{1}})));
        CHECK(gproduct(empty_member, B({{1}, {2}})).is_zero());
    }

    TEST_CASE("sign agrees with a brute-force merge sign")
    {
        const std::vector<std::pair<ElementSet, ElementSet>> cases = {
            {{1, 4}, {2, 3}}, {{5}, {1, 2, 3}}, {{2, 6, 7}, {1, 3}}, {{1, 2}, {5, 6}}};
        for (const auto& [x, y] : cases) {
            const LimitChain p = gproduct(B({x}), B({y}));
            CHECK(p.coefficient(B({set_union(x, y)})) == merge_sign(x, y));
        }
    }

    TEST_CASE("associativity")
    {
        const AssociativityReport r = verify_associativity(500, 0, 9);
        CHECK(r.passed());
        CHECK(r.nonzero > 50);
        CHECK(verify_associativity(500, 7, 9).violations == r.violations);
    }

    TEST_CASE("Leibniz classification")
    {
        CHECK(leibniz_classify(B({{1, 2}, {1, 3}}), B({{4}, {5}})) == LeibnizClass::product_nonzero);
        CHECK(leibniz_classify(B({{1, 2}}), B({{3}, {4}})) == LeibnizClass::size_mismatch);
        CHECK(leibniz_classify(B({{1, 2}, {1, 3}}), B({{1, 4}, {1, 5}})) == LeibnizClass::overlap_in_cores);
        CHECK(leibniz_classify(B({{1, 2}, {1, 3}}), B({{2, 4}, {2, 5}})) == LeibnizClass::outside_hypothesis);
        CHECK_FALSE(in_regime(LeibnizClass::outside_hypothesis));
    }

    TEST_CASE("Leibniz holds in regime")
    {
        const LeibnizReport r = verify_leibniz(200, 0, 10);
        CHECK(r.failures.empty());
        CHECK(r.per_class[0] > 0);
        CHECK(r.per_class[1] > 0);
        CHECK(r.per_class[2] > 0);
        CHECK(r.counterexamples_reproduced);
        // the batch actually separates the two sign conventions
        CHECK(r.shift_failures > 20);
        CHECK(r.passed());

        const LeibnizCase ok = leibniz_check(B({{1, 2}, {1, 3}}), B({{4, 5}, {4, 6}}));
        CHECK(ok.holds());
        CHECK_FALSE(ok.lhs.is_zero());
    }

    TEST_CASE("counterexamples outside the hypothesis")
    {
        const LeibnizCase c = delta_leibniz_counterexample();
        CHECK(c.klass == LeibnizClass::outside_hypothesis);
        CHECK(c.lhs.is_zero());
        CHECK(c.rhs.size() == 1);
        CHECK(abs(c.rhs.coefficient(B({{1, 2, 4}, {1, 3, 5}}))) == 1);
        CHECK_FALSE(c.holds());

        const DLeibnizCounterexample d = d_leibniz_counterexample();
        CHECK(d.product.is_zero());
        CHECK(d.d_lambda == LimitChain(B({{1, 2}, {3, 4}})));
        CHECK(d.rhs.size() == 1);
        CHECK(abs(d.rhs.coefficient(B({{1, 2, 6}, {3, 4, 7}}))) == 1);
        CHECK(d.reproduced);
    }

    TEST_CASE("sign witness")
    {
        const SignWitness w = sign_witness(B({{1, 4}}), B({{2, 3}}));
        CHECK(w.epsilon == 2);
        CHECK(w.gaps_a == std::vector<std::size_t>{2});
        CHECK(sign_witness(B({{1, 2}}), B({{5, 6}})).gaps_a == std::vector<std::size_t>{0});
        CHECK(sign_lemmas_check(B({{1, 4}}), B({{2, 3}})).passed());
        CHECK_THROWS_AS(sign_lemmas_check(B({{1}}), B({{1}})), InvalidInput);
    }

    TEST_CASE("sign identities exhaustive")
    {
        const SignLemmaReport r = sign_lemmas_exhaustive(8);
        CHECK(r.passed());
        // pairs of disjoint nonempty subsets of [8]
        CHECK(r.pairs == 6561 - 2 * 256 + 1);
        CHECK(r.identities > 0);
    }

    TEST_CASE("stabilization")
    {
        const StabilizationReport r = verify_stabilization(3, 5);
        CHECK(r.nonzero_pairs > 0);
        CHECK(r.surviving.empty());
        CHECK(r.generator_misses.empty());
        CHECK(r.independence_losses.empty());
        CHECK(verify_stabilization(2, 3).passed());
    }
}
