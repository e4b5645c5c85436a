#include "klim/limit.hpp"

#include <algorithm>

#include "klim/parallel.hpp"

namespace klim {

namespace {

ElementSet common_intersection(const std::vector<ElementSet>& members)
{
    if (members.empty())
        return {};
    ElementSet out = members.front();
    for (std::size_t i = 1; i < members.size(); ++i)
        out = set_intersection(out, members[i]);
    return out;
}

void check_regime(int q, int stage_k)
{
    if (q < 0 || stage_k < 2)
        throw InvalidInput("need q >= 0 and stage k >= 2");
    if (stage_k < q + 1)
        throw InvalidInput("q = " + std::to_string(q) + " needs stage k >= " + std::to_string(q + 1) +
                           " (q <= k-1 keeps every two atoms intersecting)");
}

} // namespace

LimitIndex::LimitIndex(ComplementFamily family) : family_(std::move(family))
{
    if (family_.empty())
        return;
    core_ = common_intersection(family_.members());
    for (const ElementSet& m : family_)
        halo_.push_back(set_difference(m, core_));
    std::sort(halo_.begin(), halo_.end());
}

LimitIndex LimitIndex::from_pair(ElementSet core, std::vector<ElementSet> halo)
{
    if (!is_strict_set(core))
        throw InvalidInput("core must be a sorted set");
    if (halo.empty()) {
        if (!core.empty())
            throw InvalidInput("the unit has an empty core");
        return LimitIndex();
    }
    std::vector<ElementSet> members;
    for (ElementSet& h : halo) {
        std::sort(h.begin(), h.end());
        if (!is_disjoint(h, core))
            throw InvalidInput("halo member " + to_string(h) + " meets the core");
        members.push_back(set_union(h, core));
    }
    LimitIndex b{ComplementFamily(std::move(members))};
    if (b.core() != core)
        throw InvalidInput("halo members share elements; the pair is not canonical");
    return b;
}

LimitIndex limit_index(std::vector<ElementSet> members)
{
    return LimitIndex(ComplementFamily(std::move(members)));
}

LimitIndex canonicalize(const ComplementFamily& f)
{
    return LimitIndex(f);
}

std::string to_string(const LimitIndex& b)
{
    return "b_" + to_string(b.family());
}

std::string to_string(const LimitChain& c)
{
    return render(c, [](const LimitIndex& b) { return to_string(b); });
}

int codegree_limit(const LimitIndex& b)
{
    if (b.is_unit())
        throw InvalidInput("the unit b_{} carries no codegree");
    return 2 * (static_cast<int>(b.core().size()) - 1) + static_cast<int>(b.size());
}

int codegree_finite(const ComplementFamily& f, int k, int l)
{
    if (k < 2 || k > l)
        throw InvalidInput("invalid arrangement: need 2 <= k <= l");
    if (f.empty())
        throw InvalidInput("the empty family carries no codegree");
    if (static_cast<int>(f.member_size()) != l - k)
        throw InvalidInput("family members must have size l - k = " + std::to_string(l - k));
    if (f.max_element() > l)
        throw InvalidInput("family member outside [l]");
    const int ceiling = (l - 1 + k - 2) / (k - 1);
    return 2 * static_cast<int>(f.intersection().size()) + static_cast<int>(f.size()) - ceiling;
}

LimitChain limit_d(const LimitIndex& b)
{
    LimitChain out;
    if (b.size() < 2)
        return out;
    const auto& members = b.members();
    for (std::size_t j = 0; j < members.size(); ++j) {
        std::vector<ElementSet> rest;
        for (std::size_t i = 0; i < members.size(); ++i)
            if (i != j)
                rest.push_back(members[i]);
        if (common_intersection(rest) != b.core())
            continue;
        out.add(LimitIndex(ComplementFamily(std::move(rest))), (j + 1) % 2 ? Rational(-1) : Rational(1));
    }
    return out;
}

LimitChain limit_d(const LimitChain& c)
{
    LimitChain out;
    for (const auto& [b, coeff] : c)
        out += coeff * limit_d(b);
    return out;
}

std::vector<TheoremGenerator> theorem_generators(int q, int k)
{
    if (k < 2 || q < 0)
        throw InvalidInput("need k >= 2 and q >= 0");
    if (q > k - 1)
        throw InvalidInput("q = " + std::to_string(q) + " exceeds k-1 = " + std::to_string(k - 1));
    const int l = q + k;
    const ElementSet ground = interval(1, l);
    std::map<AtomSet, TheoremGenerator> found;
    for (const ElementSet& core : subsets_of_size(ground, static_cast<std::size_t>(k - 1))) {
        const ElementSet rest = set_difference(ground, core);
        for (std::size_t r = 1; r <= rest.size(); ++r)
            for (const ElementSet& leaves : subsets_of_size(rest, r)) {
                std::vector<Atom> atoms;
                for (int f : leaves)
                    atoms.emplace_back(set_union(core, {f}));
                AtomSet s(l, std::move(atoms));
                // a single atom arises from every (k-1)-subset; keep the first core
                found.try_emplace(s, TheoremGenerator{s, core, leaves});
            }
    }
    std::vector<TheoremGenerator> out;
    out.reserve(found.size());
    for (auto& [s, g] : found)
        out.push_back(std::move(g));
    return out;
}

TildeMove tilde_replace(const AtomSet& s, const Atom& sigma, const ElementSet& p)
{
    if (!s.contains(sigma))
        throw InvalidInput("tilde_replace: " + to_string(sigma) + " is not in S");
    const std::size_t k = s.arity();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (is_disjoint(s.atoms()[i].elements(), s.atoms()[j].elements()))
                throw InvalidInput("tilde_replace: atoms of S must pairwise intersect");
    for (const Atom& t : s)
        if (free_vertices(t, s).empty())
            throw InvalidInput("tilde_replace: " + to_string(t) + " has no free vertex");
    if (!is_independent(s))
        throw InvalidInput("tilde_replace: S is not independent");
    const auto candidates = pset_candidates(s, static_cast<int>(k));
    if (std::find(candidates.begin(), candidates.end(), p) == candidates.end())
        throw InvalidInput("tilde_replace: " + to_string(p) + " is not a valid pivot set for S");

    const ElementSet base = set_union(free_vertices(sigma, s), intersection_of(s));
    if (base.size() > k)
        throw InvalidInput("tilde_replace: free vertices and common core already exceed k elements");
    const std::size_t need = k - base.size();
    const auto fillers = subsets_of_size(set_difference(p, base), need);
    if (fillers.empty())
        throw InvalidInput("tilde_replace: the pivot set cannot complete " + to_string(base) + " to size " +
                           std::to_string(k));
    TildeMove move{sigma, Atom(set_union(base, fillers.front())), fillers.front(), s, false, std::nullopt, {}};
    if (move.sigma_tilde == sigma) {
        move.identity = true;
        return move;
    }
    if (s.contains(move.sigma_tilde))
        throw InvalidInput("tilde_replace: " + to_string(move.sigma_tilde) + " is already in S");
    move.replaced = s.without(sigma).with(move.sigma_tilde);
    move.witness = s.with(move.sigma_tilde);
    move.witness_boundary = differential(*move.witness);
    return move;
}

LimitHomology limit_homology(int q, int stage_k, int jobs)
{
    check_regime(q, stage_k);
    LimitHomology out;
    out.q = q;
    out.stage_k = stage_k;
    out.l = q + stage_k;
    const FiniteComplex cx = build_complex(stage_k, out.l);
    const std::vector<int> degs = cx.degrees();
    std::vector<LimitClasses> found(degs.size());
    const std::size_t unit = cx.index_of(0).value();
    std::vector<std::size_t> unit_hits(degs.size(), 0);
    parallel_for(degs.size(), jobs, [&](std::size_t i) {
        const int d = degs[i];
        const VectorSpaceBasis cycles = kernel_basis(cx.differential(d));
        const VectorSpaceBasis boundaries = image_basis(cx.differential(d - 1));
        const VectorSpaceBasis reps = quotient_representatives(cycles, boundaries);
        found[i].degree = d;
        for (const SparseVector& v : reps.vectors()) {
            // the unit spans its own summand; keep it out of the graded part
            if (d == 0 && v == unit_vector(unit)) {
                ++unit_hits[i];
                continue;
            }
            found[i].representatives.push_back(cx.to_chain(v, d));
        }
        found[i].dimension = found[i].representatives.size();
    });
    for (std::size_t i = 0; i < degs.size(); ++i) {
        out.unit_dimension += unit_hits[i];
        if (found[i].dimension)
            out.by_codegree.emplace(2 * out.l - 4 - degs[i], std::move(found[i]));
    }
    if (out.unit_dimension != 1)
        throw VerificationFailure("limit_homology: the unit class was not isolated");
    return out;
}

bool GenerationReport::passed() const noexcept
{
    return non_cycles.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const GenerationRow& r) { return r.passed(); });
}

GenerationReport verify_generation(int q, int stage_k, int jobs)
{
    const LimitHomology h = limit_homology(q, stage_k, jobs);
    GenerationReport rep;
    rep.q = q;
    rep.stage_k = stage_k;
    const FiniteComplex cx = build_complex(stage_k, h.l);
    std::map<int, std::vector<SparseVector>> gens;
    for (const TheoremGenerator& g : theorem_generators(q, stage_k)) {
        const int d = degree(g.s);
        SparseVector v = cx.to_vector(ChainElement(g.s), d);
        if (!differential(g.s).is_zero())
            rep.non_cycles.push_back(to_string(g.s));
        gens[d].push_back(std::move(v));
    }
    std::vector<const std::pair<const int, LimitClasses>*> entries;
    for (const auto& e : h.by_codegree)
        entries.push_back(&e);
    rep.rows.resize(entries.size());
    parallel_for(entries.size(), jobs, [&](std::size_t i) {
        const auto& [codeg, classes] = *entries[i];
        GenerationRow& row = rep.rows[i];
        row.codegree = codeg;
        row.degree = classes.degree;
        row.homology_dimension = classes.dimension;
        EchelonReducer span(cx.dimension(classes.degree));
        const SparseMatrix& d_in = cx.differential(classes.degree - 1);
        for (std::size_t c = 0; c < d_in.ncols(); ++c)
            span.insert(d_in.column(c));
        const std::size_t base = span.rank();
        if (auto it = gens.find(classes.degree); it != gens.end()) {
            row.generators = it->second.size();
            for (const SparseVector& v : it->second)
                span.insert(v);
        }
        row.generator_rank = span.rank() - base;
        for (const ChainElement& r : classes.representatives)
            if (!span.in_span(cx.to_vector(r, classes.degree)))
                ++row.uncovered;
    });
    return rep;
}

} // namespace klim
