#include "klim/bicx.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <set>

#include "klim/parallel.hpp"

namespace klim {

namespace {

// Calls fn(idx) for every r-subset of {0..N-1}, indices ascending, in lex order.
template <class Fn>
void for_each_combination(std::size_t total, std::size_t r, Fn&& fn)
{
    if (r > total)
        return;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i)
        idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == total - r + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

std::uint32_t bits_of(const ElementSet& s)
{
    std::uint32_t out = 0;
    for (int x : s)
        out |= std::uint32_t{1} << (x - 1);
    return out;
}

// Streams every nonempty family of equal-size subsets of [n] with at most m
// members (0: unbounded), optionally requiring empty common intersection and
// at least min_members members.
template <class Fn>
void for_each_family(int n, std::size_t m, std::size_t min_members, bool empty_meet, Fn&& fn)
{
    if (n < 0 || n > 31)
        throw InvalidInput("ground set size must lie in [0, 31]");
    const ElementSet ground = interval(1, n);
    for (int q = 0; q <= n; ++q) {
        const auto sets = subsets_of_size(ground, static_cast<std::size_t>(q));
        std::vector<std::uint32_t> bits;
        for (const auto& s : sets)
            bits.push_back(bits_of(s));
        const std::size_t top = m ? std::min(m, sets.size()) : sets.size();
        for (std::size_t r = std::max<std::size_t>(min_members, 1); r <= top; ++r)
            for_each_combination(sets.size(), r, [&](const std::vector<std::size_t>& idx) {
                if (empty_meet) {
                    std::uint32_t meet = ~std::uint32_t{0};
                    for (std::size_t i : idx)
                        meet &= bits[i];
                    if (meet)
                        return;
                }
                std::vector<ElementSet> members;
                members.reserve(idx.size());
                for (std::size_t i : idx)
                    members.push_back(sets[i]);
                fn(std::move(members));
            });
    }
}

ElementSet union_all(const std::vector<ElementSet>& sets)
{
    ElementSet out;
    for (const ElementSet& s : sets)
        out = set_union(out, s);
    return out;
}

std::vector<ElementSet> halo_of_key(const SummandKey& key)
{
    return key.label.empty() ? std::vector<ElementSet>{ElementSet{}} : key.label;
}

void check_key(const SummandKey& key)
{
    if (key.label.empty()) {
        if (key.i != 0)
            throw InvalidInput("summand " + to_string(key) + ": a positive i needs a nonempty label");
        return;
    }
    if (key.label.size() == 1)
        throw InvalidInput("summand " + to_string(key) + ": a one-member label has nonempty intersection");
    ComplementFamily f(key.label);
    if (f.members() != key.label)
        throw InvalidInput("summand " + to_string(key) + ": label is not canonical");
    if (f.member_size() != key.i || key.i == 0)
        throw InvalidInput("summand " + to_string(key) + ": label members must have size i >= 1");
    if (!f.intersection().empty())
        throw InvalidInput("summand " + to_string(key) + ": label has nonempty intersection");
}

std::string describe(const LimitIndex& b)
{
    return to_string(b);
}

SimplexChain to_simplices(const LimitChain& c, const SummandKey& key, std::string* mismatch)
{
    SimplexChain out;
    for (const auto& [b, coeff] : c) {
        auto [k2, s] = phi(b);
        if (k2 != key && mismatch)
            *mismatch = to_string(b) + " leaves summand " + to_string(key);
        out.add(s, coeff);
    }
    return out;
}

// Homology dimensions of a graded complex given as per-degree bases and a
// map sending a generator to its image; degree drops by one.
template <class Key, class Image>
std::map<std::size_t, std::size_t> graded_homology(const std::map<std::size_t, std::vector<Key>>& basis, Image&& image,
                                                   int jobs)
{
    std::map<std::size_t, std::map<Key, std::size_t>> index;
    for (const auto& [g, keys] : basis)
        for (std::size_t i = 0; i < keys.size(); ++i)
            index[g].emplace(keys[i], i);
    auto dim = [&](std::size_t g) {
        auto it = basis.find(g);
        return it == basis.end() ? std::size_t{0} : it->second.size();
    };
    std::vector<std::size_t> grades;
    for (const auto& [g, keys] : basis)
        grades.push_back(g);
    // matrix of the map out of each grade
    std::vector<SparseMatrix> out(grades.size());
    parallel_for(grades.size(), jobs, [&](std::size_t gi) {
        const std::size_t g = grades[gi];
        const std::size_t rows = g == 0 ? 0 : dim(g - 1);
        SparseMatrix mat(rows, dim(g));
        const auto& keys = basis.at(g);
        for (std::size_t c = 0; c < keys.size(); ++c)
            for (const auto& [img, coeff] : image(keys[c])) {
                if (g == 0)
                    throw VerificationFailure("graded_homology: map out of the lowest grade is nonzero");
                auto it = index.at(g - 1).find(img);
                if (it == index.at(g - 1).end())
                    throw VerificationFailure("graded_homology: image leaves the complex");
                mat.add(it->second, c, coeff);
            }
        out[gi] = std::move(mat);
    });
    std::map<std::size_t, std::size_t> result;
    for (std::size_t gi = 0; gi < grades.size(); ++gi) {
        const std::size_t g = grades[gi];
        SparseMatrix incoming(dim(g), 0);
        if (gi + 1 < grades.size() && grades[gi + 1] == g + 1)
            incoming = out[gi + 1];
        const std::size_t h = homology_dim(out[gi], incoming);
        if (h)
            result[g] = h;
    }
    return result;
}

} // namespace

LimitChain delta(const LimitIndex& b)
{
    LimitChain out;
    const ElementSet& core = b.core();
    for (std::size_t i = 0; i < core.size(); ++i) {
        std::vector<ElementSet> members;
        for (const ElementSet& m : b.members())
            members.push_back(set_difference(m, {core[i]}));
        out.add(LimitIndex(ComplementFamily(std::move(members))), (i + 1) % 2 ? Rational(-1) : Rational(1));
    }
    return out;
}

LimitChain delta(const LimitChain& c)
{
    LimitChain out;
    for (const auto& [b, coeff] : c)
        out += coeff * delta(b);
    return out;
}

std::vector<LimitIndex> families_within(int n, std::size_t m)
{
    std::vector<LimitIndex> out;
    for_each_family(n, m, 1, false, [&](std::vector<ElementSet> members) {
        out.push_back(LimitIndex(ComplementFamily(std::move(members))));
    });
    return out;
}

DeltaSquaredReport verify_delta_squared(int n, std::size_t m)
{
    DeltaSquaredReport rep;
    rep.n = n;
    rep.m = m;
    auto check = [&](const LimitIndex& b) {
        ++rep.generators_checked;
        if (!delta(delta(b)).is_zero())
            rep.violations.push_back("delta^2 " + describe(b) + " != 0");
    };
    check(LimitIndex());
    for_each_family(n, m, 1, false, [&](std::vector<ElementSet> members) {
        check(LimitIndex(ComplementFamily(std::move(members))));
    });
    return rep;
}

std::string to_string(const SummandKey& key)
{
    return "(" + std::to_string(key.i) + "," + to_string(ComplementFamily(key.label)) + ")";
}

SummandKey summand_key(const LimitIndex& b)
{
    if (b.is_unit())
        throw InvalidInput("the unit b_{} lies outside the simplicial summands");
    SummandKey key;
    key.i = b.q() - b.core().size();
    if (b.size() >= 2)
        key.label = b.halo();
    return key;
}

SimplexChain simplicial_boundary(const ElementSet& s)
{
    SimplexChain out;
    for (std::size_t i = 0; i < s.size(); ++i)
        out.add(set_difference(s, {s[i]}), (i + 1) % 2 ? Rational(-1) : Rational(1));
    return out;
}

SimplexChain simplicial_boundary(const SimplexChain& c)
{
    SimplexChain out;
    for (const auto& [s, coeff] : c)
        out += coeff * simplicial_boundary(s);
    return out;
}

int relabel(int x, const ElementSet& removed)
{
    if (x < 1 || std::binary_search(removed.begin(), removed.end(), x))
        throw InvalidInput("relabel: " + std::to_string(x) + " is not in the relabelled range");
    return x - static_cast<int>(std::lower_bound(removed.begin(), removed.end(), x) - removed.begin());
}

int unrelabel(int y, const ElementSet& removed)
{
    if (y < 1)
        throw InvalidInput("unrelabel: labels are positive");
    int x = y;
    for (int r : removed)
        if (r <= x)
            ++x;
    return x;
}

std::pair<SummandKey, ElementSet> phi(const LimitIndex& b)
{
    SummandKey key = summand_key(b);
    const ElementSet removed = union_all(key.label);
    ElementSet simplex;
    for (int x : b.core())
        simplex.push_back(relabel(x, removed));
    return {std::move(key), std::move(simplex)};
}

LimitIndex psi(const SummandKey& key, const ElementSet& simplex)
{
    check_key(key);
    if (!is_strict_set(simplex) || (!simplex.empty() && simplex.front() < 1))
        throw InvalidInput("psi: simplex must be a sorted set of positive integers");
    const ElementSet removed = union_all(key.label);
    ElementSet core;
    for (int y : simplex)
        core.push_back(unrelabel(y, removed));
    return LimitIndex::from_pair(std::move(core), halo_of_key(key));
}

DecompositionReport verify_decomposition(int n, std::size_t m)
{
    DecompositionReport rep;
    rep.n = n;
    rep.m = m;
    std::set<SummandKey> keys;
    for_each_family(n, m, 1, false, [&](std::vector<ElementSet> members) {
        const LimitIndex b{ComplementFamily(std::move(members))};
        ++rep.generators_checked;
        auto [key, s] = phi(b);
        if (psi(key, s) != b)
            rep.violations.push_back("psi(phi(" + describe(b) + ")) != " + describe(b));
        std::string mismatch;
        const SimplexChain image = to_simplices(delta(b), key, &mismatch);
        if (!mismatch.empty())
            rep.violations.push_back(mismatch);
        if (!(image == simplicial_boundary(s)))
            rep.violations.push_back("phi(delta " + describe(b) + ") != boundary(phi " + describe(b) + ")");
        keys.insert(key);
    });
    rep.summands = keys.size();
    for (const SummandKey& key : keys) {
        const int free = n - static_cast<int>(union_all(key.label).size());
        for (std::size_t t = 0; t <= static_cast<std::size_t>(free); ++t)
            for (const ElementSet& s : subsets_of_size(interval(1, free), t)) {
                ++rep.inverse_checks;
                auto [k2, s2] = phi(psi(key, s));
                if (k2 != key || s2 != s)
                    rep.violations.push_back("phi(psi(" + to_string(key) + ", " + to_string(s) + ")) is not the identity");
            }
    }
    return rep;
}

SummandHomology summand_homology(const SummandKey& key, int n)
{
    check_key(key);
    SummandHomology out;
    out.key = key;
    const ElementSet removed = union_all(key.label);
    if (!removed.empty() && removed.back() > n)
        throw InvalidInput("summand " + to_string(key) + " does not fit in [" + std::to_string(n) + "]");
    out.vertices = set_difference(interval(1, n), removed);
    if (out.vertices.empty()) {
        out.vertices = {n + 1};
        out.padded = true;
    }
    const std::vector<ElementSet> halo = halo_of_key(key);
    std::map<std::size_t, std::vector<LimitIndex>> basis;
    for (std::size_t t = 0; t <= out.vertices.size(); ++t)
        for (const ElementSet& core : subsets_of_size(out.vertices, t)) {
            basis[t].push_back(LimitIndex::from_pair(core, halo));
            ++out.generators;
        }
    for (const auto& [t, h] : graded_homology(basis, [](const LimitIndex& b) { return delta(b); }, 1))
        out.homology += h;
    return out;
}

ExactnessReport verify_delta_exactness(int n, std::size_t m, int jobs)
{
    ExactnessReport rep;
    rep.n = n;
    rep.m = m;
    std::vector<SummandKey> keys{SummandKey{}};
    for_each_family(n, m, 2, true, [&](std::vector<ElementSet> members) {
        const std::size_t i = members.front().size();
        keys.push_back(SummandKey{i, std::move(members)});
    });
    rep.summands = keys.size();
    std::vector<SummandHomology> results(keys.size());
    parallel_for(keys.size(), jobs, [&](std::size_t i) { results[i] = summand_homology(keys[i], n); });
    for (SummandHomology& r : results) {
        rep.generators += r.generators;
        rep.padded += r.padded ? 1 : 0;
        if (r.homology)
            rep.failures.push_back(std::move(r));
    }
    return rep;
}

std::pair<std::size_t, std::size_t> grading_mt(const LimitIndex& b)
{
    return {b.size(), b.core().size()};
}

std::pair<int, int> grading_mn(const LimitIndex& b, int k, int l)
{
    if (b.is_unit())
        throw InvalidInput("the unit is not graded by (m, n)");
    if (k < 1 || k > l)
        throw InvalidInput("grading_mn: need 1 <= k <= l");
    if (static_cast<int>(b.q()) != l - k || b.family().max_element() > l)
        throw InvalidInput(to_string(b) + " is not realized at stage (" + std::to_string(k) + "," + std::to_string(l) + ")");
    return {l - k + 1, static_cast<int>(b.size() + b.core().size())};
}

std::string to_string(Commutation c)
{
    switch (c) {
    case Commutation::commute:
        return "commute";
    case Commutation::anticommute:
        return "anticommute";
    default:
        return "mixed";
    }
}

LimitChain total_differential(const LimitIndex& b, Commutation relation)
{
    LimitChain out = limit_d(b);
    const bool flip = relation == Commutation::commute && b.size() % 2 == 1;
    out += (flip ? Rational(-1) : Rational(1)) * delta(b);
    return out;
}

bool DoubleComplexReport::passed() const noexcept
{
    return relation != Commutation::mixed && disagreements.empty() && total_square_failures.empty() &&
           grading_failures.empty() && total_homology.empty() &&
           std::all_of(columns.begin(), columns.end(), [](const ColumnExactness& c) { return c.homology.empty(); });
}

DoubleComplexReport verify_double_complex(int n, std::size_t m, int jobs)
{
    DoubleComplexReport rep;
    rep.n = n;
    rep.m = m;
    std::vector<LimitIndex> gens;
    for_each_family(n, m, 1, false, [&](std::vector<ElementSet> members) {
        gens.emplace_back(ComplementFamily(std::move(members)));
    });
    rep.generators_checked = gens.size();

    for (const LimitIndex& b : gens) {
        const LimitChain dd = limit_d(delta(b));
        const LimitChain ee = delta(limit_d(b));
        if (dd.is_zero() && ee.is_zero())
            ++rep.both_zero;
        else if (dd == ee)
            ++rep.commuting;
        else if (dd == Rational(-1) * ee)
            ++rep.anticommuting;
        else
            rep.disagreements.push_back(describe(b));

        const auto [mb, tb] = grading_mt(b);
        for (const auto& [c, coeff] : delta(b))
            if (grading_mt(c) != std::pair{mb, tb - 1})
                rep.grading_failures.push_back("delta " + describe(b) + " -> " + describe(c));
        for (const auto& [c, coeff] : limit_d(b))
            if (grading_mt(c) != std::pair{mb - 1, tb})
                rep.grading_failures.push_back("d " + describe(b) + " -> " + describe(c));
        // (m, n) bookkeeping at the finite stage (k, l) = (n - q, n)
        const int l = std::max(n, b.family().max_element());
        const int k = l - static_cast<int>(b.q());
        if (k >= 1) {
            const auto [m0, n0] = grading_mn(b, k, l);
            for (const auto& [c, coeff] : delta(b))
                if (grading_mn(c, k + 1, l) != std::pair{m0 - 1, n0 - 1})
                    rep.grading_failures.push_back("(m,n) under delta at " + describe(b));
            for (const auto& [c, coeff] : limit_d(b))
                if (grading_mn(c, k, l) != std::pair{m0, n0 - 1})
                    rep.grading_failures.push_back("(m,n) under d at " + describe(b));
        }
    }
    if (!rep.disagreements.empty() || (rep.commuting && rep.anticommuting))
        rep.relation = Commutation::mixed;
    else if (rep.anticommuting)
        rep.relation = Commutation::anticommute;
    else
        rep.relation = Commutation::commute;

    if (rep.relation != Commutation::mixed)
        for (const LimitIndex& b : gens) {
            LimitChain once = total_differential(b, rep.relation);
            LimitChain twice;
            for (const auto& [c, coeff] : once)
                twice += coeff * total_differential(c, rep.relation);
            if (!twice.is_zero())
                rep.total_square_failures.push_back(describe(b));
        }

    // subcomplex closed under d and delta on which each column is a sum of
    // augmented simplices with vertex n always available
    const ElementSet inner = interval(1, n - 1);
    std::map<std::size_t, std::map<std::size_t, std::vector<LimitIndex>>> columns;
    std::map<std::size_t, std::vector<LimitIndex>> total;
    for (const LimitIndex& b : gens) {
        if (!is_subset(union_all(b.halo()), inner))
            continue;
        ++rep.subcomplex_generators;
        columns[b.size()][b.core().size()].push_back(b);
        total[b.size() + b.core().size()].push_back(b);
    }
    for (auto& [mm, by_t] : columns) {
        ColumnExactness col;
        col.m = mm;
        for (const auto& [t, v] : by_t)
            col.generators += v.size();
        col.homology = graded_homology(by_t, [](const LimitIndex& b) { return delta(b); }, jobs);
        rep.columns.push_back(std::move(col));
    }
    if (rep.relation != Commutation::mixed) {
        const Commutation rel = rep.relation;
        rep.total_homology =
            graded_homology(total, [rel](const LimitIndex& b) { return total_differential(b, rel); }, jobs);
    }
    return rep;
}

VanishingReport vanishing_check(int k, int l, int jobs)
{
    VanishingReport rep;
    rep.k = k;
    rep.l = l;
    rep.m = l - k + 1;
    rep.in_range = l >= 2 * k - 1;
    const FiniteComplex cx = build_complex(k, l);
    const AtomTable& table = cx.table();
    auto n_of = [&](AtomMask s) { return std::popcount(s) + l - std::popcount(table.support(s)); };

    const std::vector<int> degs = cx.degrees();
    // rank of d out of (degree, n), per degree
    std::vector<std::map<int, std::size_t>> ranks(degs.size());
    std::vector<std::map<int, std::size_t>> counts(degs.size());
    parallel_for(degs.size(), jobs, [&](std::size_t i) {
        const int d = degs[i];
        const auto& basis = cx.basis(d);
        std::map<int, std::vector<std::size_t>> cols;
        for (std::size_t c = 0; c < basis.size(); ++c)
            cols[n_of(basis[c])].push_back(c);
        const SparseMatrix& full = cx.differential(d);
        for (const auto& [nn, list] : cols) {
            SparseMatrix sub(full.nrows(), list.size());
            for (std::size_t j = 0; j < list.size(); ++j)
                sub.set_column(j, full.column(list[j]));
            ranks[i][nn] = rank(sub);
            counts[i][nn] = list.size();
        }
    });
    for (std::size_t i = 0; i < degs.size(); ++i) {
        const int d = degs[i];
        for (const auto& [nn, cnt] : counts[i]) {
            std::size_t in = 0;
            if (i > 0 && degs[i - 1] == d - 1) {
                auto it = ranks[i - 1].find(nn + 1);
                if (it != ranks[i - 1].end())
                    in = it->second;
            }
            std::size_t h = cnt - ranks[i].at(nn) - in;
            if (d == 0 && nn == l)
                --h; // the unit a_{}
            if (!h)
                continue;
            VanishingCell cell{d, nn, h};
            rep.support.push_back(cell);
            if (rep.m < nn)
                rep.violations.push_back(cell);
        }
    }
    return rep;
}

} // namespace klim
