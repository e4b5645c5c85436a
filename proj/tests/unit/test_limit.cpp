#include <doctest.h>

#include <set>

#include "klim/limit.hpp"
#include "oracles.hpp"

using namespace klim;

namespace {

AtomSet S(int l, std::vector<ElementSet> atoms)
{
    std::vector<Atom> a;
    for (auto& e : atoms)
        a.emplace_back(std::move(e));
    return AtomSet(l, std::move(a));
}

// every family of equal-size subsets of [n] with at most m members
std::vector<LimitIndex> all_families(int n, std::size_t m)
{
    std::vector<LimitIndex> out{LimitIndex()};
    const ElementSet ground = interval(1, n);
    for (int q = 0; q <= n; ++q) {
        const auto subsets = subsets_of_size(ground, static_cast<std::size_t>(q));
        std::vector<std::size_t> idx(subsets.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = i;
        for (std::size_t r = 1; r <= m && r <= subsets.size(); ++r) {
            std::vector<int> pick(subsets.size(), 0);
            std::fill(pick.begin(), pick.begin() + static_cast<long>(r), 1);
            do {
                std::vector<ElementSet> members;
                for (std::size_t i = 0; i < pick.size(); ++i)
                    if (pick[i])
                        members.push_back(subsets[i]);
                out.push_back(limit_index(std::move(members)));
            } while (std::prev_permutation(pick.begin(), pick.end()));
        }
    }
    return out;
}

} // namespace

TEST_CASE("canonical pair form")
{
    LimitIndex a = limit_index({{1, 3}, {2, 3}});
    CHECK(a.core() == ElementSet{3});
    CHECK(a.halo() == std::vector<ElementSet>{{1}, {2}});
    LimitIndex b = limit_index({{1, 2}});
    CHECK(b.core() == ElementSet{1, 2});
    CHECK(b.halo() == std::vector<ElementSet>{{}});
    LimitIndex c = limit_index({{1, 2}, {3, 4}});
    CHECK(c.core().empty());
    CHECK(c.halo() == std::vector<ElementSet>{{1, 2}, {3, 4}});
    for (const LimitIndex& x : {a, b, c})
        CHECK(LimitIndex::from_pair(x.core(), x.halo()) == x);
    CHECK(LimitIndex().is_unit());
    CHECK_FALSE(limit_index({{}}).is_unit());
    CHECK(limit_index({{}}) != LimitIndex());
    CHECK_THROWS_AS(LimitIndex::from_pair({3}, {{1, 2}, {1, 4}}), InvalidInput);
    CHECK_THROWS_AS(LimitIndex::from_pair({1}, {{1, 2}}), InvalidInput);
}

TEST_CASE("codegree in the limit")
{
    CHECK(codegree_limit(limit_index({{1, 2}})) == 3);
    CHECK(codegree_limit(limit_index({{1, 2}, {1, 3}, {1, 4}})) == 3);
    CHECK(codegree_limit(limit_index({{1, 2}, {3, 4}})) == 0);
    CHECK_THROWS_AS(codegree_limit(LimitIndex()), InvalidInput);
}

TEST_CASE("codegree at a finite stage")
{
    CHECK(codegree_finite(ComplementFamily(std::vector<ElementSet>{{1, 2}}), 3, 5) == 3);
    CHECK(codegree_finite(ComplementFamily(std::vector<ElementSet>{{3}, {4}}), 3, 4) == 0);
    CHECK_THROWS_AS(codegree_finite(ComplementFamily(std::vector<ElementSet>{{1}}), 3, 5), InvalidInput);
    // agrees with the limit formula in the stabilized range, and with the
    // distance to the top degree for connected atom sets
    for (auto [k, l] : {std::pair{2, 3}, {3, 4}, {3, 5}, {4, 6}}) {
        auto atoms = atoms_of(k, l);
        const int top = maximal_degree(k, l);
        for (std::uint32_t m = 1; m < (1u << atoms.size()); m += 5) {
            std::vector<Atom> pick;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (m >> i & 1)
                    pick.push_back(atoms[i]);
            AtomSet s(l, pick);
            ComplementFamily f = complement(s);
            CHECK(codegree_finite(f, k, l) == codegree_limit(LimitIndex(f)));
            CHECK(codegree_finite(f, k, l) == top - degree(s));
        }
    }
    // outside the range the two readings part ways on disconnected sets
    AtomSet apart = S(4, {{1, 2}, {3, 4}});
    CHECK(codegree_finite(complement(apart), 2, 4) != maximal_degree(2, 4) - degree(apart));
}

TEST_CASE("limit differential")
{
    CHECK(limit_d(limit_index({{1, 2}, {1, 3}})).is_zero());
    LimitChain expect;
    expect.add(limit_index({{1, 3}, {1, 4}}), -1);
    expect.add(limit_index({{1, 2}, {1, 4}}), 1);
    expect.add(limit_index({{1, 2}, {1, 3}}), -1);
    CHECK(limit_d(limit_index({{1, 2}, {1, 3}, {1, 4}})) == expect);
    CHECK(limit_d(limit_index({{1, 2}, {2, 3}, {3, 4}})) == LimitChain(limit_index({{1, 2}, {3, 4}})));
    CHECK(limit_d(limit_index({{5}})).is_zero());
    CHECK(limit_d(LimitIndex()).is_zero());
}

TEST_CASE("limit differential squares to zero and lowers codegree")
{
    for (const LimitIndex& b : all_families(7, 4)) {
        LimitChain d = limit_d(b);
        CHECK(limit_d(d).is_zero());
        for (const auto& [c, coeff] : d)
            CHECK(codegree_limit(c) == codegree_limit(b) - 1);
    }
}

TEST_CASE("generator family for limit homology")
{
    auto g12 = theorem_generators(1, 2);
    std::set<AtomSet> sets;
    for (const auto& g : g12)
        sets.insert(g.s);
    CHECK(sets.contains(S(3, {{1, 2}, {1, 3}})));
    auto g23 = theorem_generators(2, 3);
    bool found = false;
    for (const auto& g : g23)
        if (g.s == S(5, {{1, 2, 3}, {1, 2, 4}, {1, 2, 5}})) {
            found = true;
            CHECK(g.core == ElementSet{1, 2});
            CHECK(g.leaves == ElementSet{3, 4, 5});
        }
    CHECK(found);
    CHECK_THROWS_AS(theorem_generators(2, 2), InvalidInput);

    for (auto [q, k] : {std::pair{0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}) {
        auto gens = theorem_generators(q, k);
        // singles counted once, books of >= 2 leaves once per core
        const std::uint64_t books = oracle::binomial(q + k, k - 1) * ((std::uint64_t{1} << (q + 1)) - 1 - (q + 1));
        CHECK(gens.size() == books + oracle::binomial(q + k, k));
        std::set<AtomSet> next;
        for (const auto& g : theorem_generators(q, k + 1))
            next.insert(g.s);
        for (const auto& g : gens) {
            CHECK(differential(g.s).is_zero());
            CHECK(intersection_of(g.s).size() >= static_cast<std::size_t>(k - 1));
            if (g.s.size() >= 2)
                for (const Atom& a : g.s)
                    CHECK(free_vertices(a, g.s).size() == 1);
            CHECK(next.contains(stabilize(g.s, k, q + k)));
        }
    }
}

TEST_CASE("tilde replacement")
{
    AtomSet s = S(5, {{1, 3, 4}, {1, 2, 5}});
    TildeMove same = tilde_replace(s, Atom({1, 3, 4}), {1, 2});
    CHECK(same.identity);
    CHECK(same.sigma_tilde == Atom({1, 3, 4}));
    CHECK_FALSE(same.witness.has_value());

    AtomSet t = S(7, {{1, 3, 4}, {2, 3, 5}});
    CHECK(tilde_replace(t, Atom({1, 3, 4}), {1, 3}).identity);

    AtomSet u = S(7, {{1, 2, 3, 4}, {1, 2, 5, 6}, {1, 3, 5, 7}});
    TildeMove mv = tilde_replace(u, Atom({1, 2, 3, 4}), {1, 2, 5});
    CHECK_FALSE(mv.identity);
    CHECK(mv.sigma_tilde == Atom({1, 2, 4, 5}));
    CHECK(mv.replaced == S(7, {{1, 2, 4, 5}, {1, 2, 5, 6}, {1, 3, 5, 7}}));
    REQUIRE(mv.witness.has_value());
    CHECK(mv.witness_boundary.size() == 2);
    CHECK(abs(mv.witness_boundary.coefficient(u)) == 1);
    CHECK(abs(mv.witness_boundary.coefficient(mv.replaced)) == 1);

    // a pivot set that already holds sigma's missing elements gives the identity
    CHECK(tilde_replace(u, Atom({1, 2, 3, 4}), {1, 2, 3}).identity);
    CHECK_THROWS_AS(tilde_replace(u, Atom({1, 2, 3, 4}), {2, 5, 6}), InvalidInput);
    CHECK_THROWS_AS(tilde_replace(u, Atom({1, 2, 3, 5}), {1, 2, 5}), InvalidInput);
    CHECK_THROWS_AS(tilde_replace(S(4, {{1, 2}, {3, 4}}), Atom({1, 2}), {1}), InvalidInput);
}

TEST_CASE("limit homology at a stabilized stage")
{
    LimitHomology h = limit_homology(1, 2);
    CHECK(h.unit_dimension == 1);
    REQUIRE(h.by_codegree.size() == 2);
    CHECK(h.by_codegree.at(1).dimension == 3);
    CHECK(h.by_codegree.at(1).degree == 1);
    CHECK(h.by_codegree.at(0).dimension == 2);

    LimitHomology h0 = limit_homology(0, 2);
    CHECK(h0.by_codegree.size() == 1);
    CHECK(h0.by_codegree.at(-1).dimension == 1);

    LimitHomology h13 = limit_homology(1, 3);
    BettiTable b = betti(3, 4);
    std::size_t total = 0;
    for (const auto& [c, cls] : h13.by_codegree) {
        CHECK(b.by_degree.at(cls.degree) == cls.dimension + (cls.degree == 0 ? 1 : 0));
        CHECK(c == 4 - cls.degree);
        total += cls.dimension;
        for (const ChainElement& r : cls.representatives)
            CHECK(differential(r).is_zero());
    }
    std::size_t betti_total = 0;
    for (const auto& [d, n] : b.by_degree)
        betti_total += n;
    CHECK(total + 1 == betti_total);

    CHECK_THROWS_AS(limit_homology(3, 3), InvalidInput);
}

TEST_CASE("generation by book-shaped sets")
{
    for (auto [q, k] : {std::pair{0, 2}, {1, 2}, {1, 3}, {2, 3}}) {
        GenerationReport r = verify_generation(q, k);
        CHECK(r.passed());
        for (const auto& row : r.rows)
            CHECK(row.generator_rank >= row.homology_dimension);
    }
}
