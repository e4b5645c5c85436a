#include "klim/atomic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>

#include "klim/parallel.hpp"
#include "klim/random.hpp"

namespace klim {

namespace {

bool lex_less(AtomMask a, AtomMask b)
{
    while (a && b) {
        const int la = std::countr_zero(a);
        const int lb = std::countr_zero(b);
        if (la != lb)
            return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return !a && b;
}

std::size_t saturating_binomial(std::size_t n, std::size_t r)
{
    constexpr std::size_t cap = std::numeric_limits<std::size_t>::max();
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > cap)
            return cap;
    }
    return static_cast<std::size_t>(acc);
}

// Integer partitions of l; each part of size >= 2 must have size >= k
// (a non-singleton block of a flat is a connected union of k-sets).
void flat_shapes(int remaining, int max_part, int k, std::vector<int>& parts, std::vector<std::vector<int>>& out)
{
    if (remaining == 0) {
        out.push_back(parts);
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        if (p >= 2 && p < k)
            continue;
        parts.push_back(p);
        flat_shapes(remaining - p, p, k, parts, out);
        parts.pop_back();
    }
}

// Degrees whose homology can see generators removed by a |S| <= bound cut.
// Within a flat of codim c holding a atoms, H at size s uses sizes s and s+1.
std::set<int> cut_affected_degrees(int k, int l, std::size_t bound)
{
    std::set<int> out;
    std::vector<std::vector<int>> shapes;
    std::vector<int> parts;
    flat_shapes(l, l, k, parts, shapes);
    for (const auto& shape : shapes) {
        std::size_t c = 0;
        std::size_t a = 0;
        for (int p : shape) {
            c += static_cast<std::size_t>(p - 1);
            if (p >= k)
                a += saturating_binomial(static_cast<std::size_t>(p), static_cast<std::size_t>(k));
        }
        if (c == 0)
            continue;
        for (std::size_t s = bound; s <= a; ++s)
            if (s > bound || s + 1 <= a)
                out.insert(static_cast<int>(2 * c) - static_cast<int>(s));
    }
    return out;
}

} // namespace

AtomTable::AtomTable(int k, int l) : k_(k), l_(l), atoms_(atoms_of(k, l))
{
    if (l > max_ambient || atoms_.size() > max_atoms)
        throw ResourceLimit("A(" + std::to_string(k) + "," + std::to_string(l) + ") has " +
                            std::to_string(atoms_.size()) + " atoms; at most " + std::to_string(max_atoms) +
                            " atoms and l <= " + std::to_string(max_ambient) + " are supported");
    for (const Atom& a : atoms_) {
        std::uint32_t m = 0;
        for (int x : a.elements())
            m |= std::uint32_t{1} << (x - 1);
        element_masks_.push_back(m);
    }
}

std::size_t AtomTable::index_of(const Atom& a) const
{
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a)
        throw InvalidInput("atom " + to_string(a) + " is not an atom of A(" + std::to_string(k_) + "," +
                           std::to_string(l_) + ")");
    return static_cast<std::size_t>(it - atoms_.begin());
}

AtomMask AtomTable::mask_of(const AtomSet& s) const
{
    if (s.ambient() != l_)
        throw InvalidInput("atom set lives in ambient " + std::to_string(s.ambient()) + ", expected " +
                           std::to_string(l_));
    AtomMask m = 0;
    for (const Atom& a : s)
        m |= AtomMask{1} << index_of(a);
    return m;
}

AtomSet AtomTable::atom_set(AtomMask m) const
{
    std::vector<Atom> atoms;
    for (; m; m &= m - 1)
        atoms.push_back(atoms_[static_cast<std::size_t>(std::countr_zero(m))]);
    return AtomSet(l_, std::move(atoms));
}

std::uint64_t AtomTable::flat_key(AtomMask m) const
{
    std::array<int, max_ambient> parent{};
    for (int i = 0; i < l_; ++i)
        parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (; m; m &= m - 1) {
        std::uint32_t e = element_masks_[static_cast<std::size_t>(std::countr_zero(m))];
        const int first = find(std::countr_zero(e));
        for (e &= e - 1; e; e &= e - 1) {
            int r = find(std::countr_zero(e));
            if (r == first)
                continue;
            // keep the smaller root so roots are block minima
            if (r < first)
                parent[find(first)] = r;
            else
                parent[r] = find(first);
        }
    }
    std::uint64_t key = 0;
    for (int i = 0; i < l_; ++i)
        key |= static_cast<std::uint64_t>(find(i)) << (4 * i);
    return key;
}

int AtomTable::codim(AtomMask m) const
{
    const std::uint64_t key = flat_key(m);
    int blocks = 0;
    for (int i = 0; i < l_; ++i)
        if (static_cast<int>((key >> (4 * i)) & 0xF) == i)
            ++blocks;
    return l_ - blocks;
}

int AtomTable::degree(AtomMask m) const
{
    return 2 * codim(m) - std::popcount(m);
}

std::uint32_t AtomTable::support(AtomMask m) const
{
    std::uint32_t out = 0;
    for (; m; m &= m - 1)
        out |= element_masks_[static_cast<std::size_t>(std::countr_zero(m))];
    return out;
}

int degree(const AtomSet& s)
{
    return 2 * codim(s) - static_cast<int>(s.size());
}

ChainElement differential(const AtomSet& s)
{
    ChainElement out;
    const Partition full = closure_partition(s);
    for (std::size_t j = 0; j < s.size(); ++j) {
        AtomSet rest = s.without(s.atoms()[j]);
        if (closure_partition(rest) == full)
            out.add(rest, (j + 1) % 2 ? Rational(-1) : Rational(1));
    }
    return out;
}

ChainElement differential(const ChainElement& c)
{
    ChainElement out;
    for (const auto& [s, coeff] : c)
        out += coeff * differential(s);
    return out;
}

ChainElement cup(const AtomSet& s, const AtomSet& t)
{
    if (s.ambient() != t.ambient())
        throw InvalidInput("cup: operands live in different ambients");
    if (!s.empty() && !t.empty() && s.arity() != t.arity())
        throw InvalidInput("cup: operands have different arity");
    std::vector<Atom> both = s.atoms();
    both.insert(both.end(), t.begin(), t.end());
    std::sort(both.begin(), both.end());
    if (std::adjacent_find(both.begin(), both.end()) != both.end())
        return {};
    AtomSet u(s.ambient(), std::move(both));
    if (codim(s) + codim(t) != codim(u))
        return {};
    const std::size_t eps = inversion_count(s.atoms(), t.atoms());
    return ChainElement(u, eps % 2 ? Rational(-1) : Rational(1));
}

ChainElement cup(const ChainElement& a, const ChainElement& b)
{
    return bilinear(a, b, [](const AtomSet& s, const AtomSet& t) { return cup(s, t); });
}

int maximal_degree(int k, int l)
{
    if (k < 2 || k > l)
        throw InvalidInput("maximal_degree: need 2 <= k <= l");
    return 2 * (l - 1) - (l - 1 + k - 2) / (k - 1);
}

std::size_t generator_count(int k, int l, std::optional<std::size_t> max_atoms)
{
    if (k < 2 || k > l)
        throw InvalidInput("invalid arrangement: need 2 <= k <= l");
    const std::size_t n = saturating_binomial(static_cast<std::size_t>(l), static_cast<std::size_t>(k));
    const std::size_t cap = std::numeric_limits<std::size_t>::max();
    const std::size_t top = max_atoms ? std::min(*max_atoms, n) : n;
    if (top == n && n >= 64)
        return cap;
    if (top == n)
        return std::size_t{1} << n;
    std::size_t total = 0;
    for (std::size_t s = 0; s <= top; ++s) {
        const std::size_t c = saturating_binomial(n, s);
        if (c > cap - total)
            return cap;
        total += c;
    }
    return total;
}

std::vector<int> FiniteComplex::degrees() const
{
    std::vector<int> out;
    for (const auto& [d, b] : basis_)
        out.push_back(d);
    return out;
}

const std::vector<AtomMask>& FiniteComplex::basis(int degree) const
{
    static const std::vector<AtomMask> none;
    auto it = basis_.find(degree);
    return it == basis_.end() ? none : it->second;
}

const SparseMatrix& FiniteComplex::differential(int degree) const
{
    static const SparseMatrix none;
    auto it = diff_.find(degree);
    return it == diff_.end() ? none : it->second;
}

std::optional<std::size_t> FiniteComplex::index_of(AtomMask m) const
{
    auto it = index_.find(m);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

SparseVector FiniteComplex::to_vector(const ChainElement& c, int degree) const
{
    SparseMatrix col(dimension(degree), 1);
    for (const auto& [s, coeff] : c) {
        const AtomMask m = table_.mask_of(s);
        auto idx = index_of(m);
        if (!idx || table_.degree(m) != degree)
            throw InvalidInput("chain term " + to_string(s) + " is not a generator of degree " + std::to_string(degree));
        col.add(*idx, 0, coeff);
    }
    return col.column(0);
}

ChainElement FiniteComplex::to_chain(const SparseVector& v, int degree) const
{
    const auto& b = basis(degree);
    ChainElement out;
    for (const auto& [i, coeff] : v)
        out.add(table_.atom_set(b.at(i)), coeff);
    return out;
}

FiniteComplex assemble_complex(int k, int l, const BuildOptions& opts)
{
    const std::size_t count = generator_count(k, l, opts.max_atoms);
    if (count > opts.generator_ceiling)
        throw ResourceLimit("A(" + std::to_string(k) + "," + std::to_string(l) + ") needs " +
                            (count == std::numeric_limits<std::size_t>::max() ? std::string("more than 2^64")
                                                                               : std::to_string(count)) +
                            " generators, above the ceiling of " + std::to_string(opts.generator_ceiling) +
                            "; pass a smaller --max-atoms bound");
    FiniteComplex cx{AtomTable(k, l)};
    const AtomTable& table = cx.table_;
    const std::size_t n = table.size();
    const bool bounded = opts.max_atoms && *opts.max_atoms < n;
    if (bounded)
        cx.max_atoms_ = opts.max_atoms;

    std::vector<AtomMask> masks;
    masks.reserve(count);
    if (!bounded) {
        for (AtomMask m = 0; m < (AtomMask{1} << n); ++m)
            masks.push_back(m);
    } else {
        masks.push_back(0);
        for (std::size_t s = 1; s <= *opts.max_atoms; ++s) {
            // Gosper's hack over n-bit words with popcount s
            AtomMask m = (AtomMask{1} << s) - 1;
            const AtomMask limit = AtomMask{1} << n;
            while (m < limit) {
                masks.push_back(m);
                const AtomMask c = m & (~m + 1);
                const AtomMask r = m + c;
                m = (((r ^ m) >> 2) / c) | r;
            }
        }
    }

    std::vector<std::uint64_t> flats(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        flats[i] = table.flat_key(masks[i]);
        const int deg = table.degree(masks[i]);
        cx.basis_[deg].push_back(masks[i]);
    }
    for (auto& [d, b] : cx.basis_) {
        std::sort(b.begin(), b.end(), lex_less);
        for (std::size_t i = 0; i < b.size(); ++i)
            cx.index_.emplace(b[i], i);
    }

    if (!cx.basis_.empty()) {
        const int lo = cx.basis_.begin()->first - 1;
        const int hi = cx.basis_.rbegin()->first;
        for (int d = lo; d <= hi; ++d) {
            const auto& src = cx.basis(d);
            SparseMatrix mat(cx.dimension(d + 1), src.size());
            for (std::size_t col = 0; col < src.size(); ++col) {
                const AtomMask m = src[col];
                const std::uint64_t key = table.flat_key(m);
                SparseVector entries;
                int position = 0;
                for (AtomMask rest = m; rest; rest &= rest - 1) {
                    ++position;
                    const AtomMask smaller = m & ~(rest & (~rest + 1));
                    if (table.flat_key(smaller) != key)
                        continue;
                    entries.emplace_back(cx.index_.at(smaller), position % 2 ? Rational(-1) : Rational(1));
                }
                std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
                mat.set_column(col, std::move(entries));
            }
            cx.diff_.emplace(d, std::move(mat));
        }
    }
    if (bounded)
        cx.affected_ = cut_affected_degrees(k, l, *opts.max_atoms);
    return cx;
}

FiniteComplex build_complex(int k, int l, const BuildOptions& opts)
{
    FiniteComplex cx = assemble_complex(k, l, opts);
    for (int d : cx.degrees())
        if (!(cx.differential(d + 1) * cx.differential(d)).is_zero())
            throw VerificationFailure("d^2 != 0 in degree " + std::to_string(d) + " of A(" + std::to_string(k) + "," +
                                      std::to_string(l) + ")");
    return cx;
}

BettiTable betti(const FiniteComplex& cx, int jobs)
{
    BettiTable out;
    out.k = cx.k();
    out.l = cx.l();
    out.max_atoms = cx.max_atoms();
    out.indeterminate = cx.indeterminate_degrees();
    const std::vector<int> degs = cx.degrees();
    if (degs.empty())
        return out;
    const int lo = degs.front() - 1;
    const int hi = degs.back();
    std::vector<std::size_t> ranks(static_cast<std::size_t>(hi - lo + 1));
    parallel_for(ranks.size(), jobs, [&](std::size_t i) { ranks[i] = rank(cx.differential(lo + static_cast<int>(i))); });
    for (int d : degs) {
        const std::size_t r_out = ranks[static_cast<std::size_t>(d - lo)];
        const std::size_t r_in = ranks[static_cast<std::size_t>(d - 1 - lo)];
        const std::size_t h = cx.dimension(d) - r_out - r_in;
        if (cx.determinate(d) && h)
            out.by_degree[d] = h;
    }
    return out;
}

BettiTable betti(int k, int l, const BuildOptions& opts, int jobs)
{
    return betti(build_complex(k, l, opts), jobs);
}

AtomSet stabilize(const AtomSet& s, int k, int l)
{
    if (s.ambient() != l)
        throw InvalidInput("stabilize: atom set is not in ambient " + std::to_string(l));
    if (!s.empty() && static_cast<int>(s.arity()) != k)
        throw InvalidInput("stabilize: atom set does not have arity " + std::to_string(k));
    std::vector<Atom> atoms;
    for (const Atom& a : s) {
        ElementSet e = a.elements();
        e.push_back(l + 1);
        atoms.emplace_back(std::move(e));
    }
    return AtomSet(l + 1, std::move(atoms));
}

ElementSet monoid_product(const ElementSet& sigma, int l, const ElementSet& tau, int m)
{
    if (!is_strict_set(sigma) || !is_strict_set(tau))
        throw InvalidInput("monoid_product: operands must be sorted sets");
    if ((!sigma.empty() && (sigma.front() < 1 || sigma.back() > l)) || (!tau.empty() && (tau.front() < 1 || tau.back() > m)))
        throw InvalidInput("monoid_product: operand outside its ambient");
    ElementSet out = sigma;
    for (int j : tau)
        out.push_back(j + l);
    return out;
}

DSquaredReport verify_d_squared(int k, int l, const BuildOptions& opts)
{
    DSquaredReport rep;
    rep.k = k;
    rep.l = l;
    const FiniteComplex cx = assemble_complex(k, l, opts);
    rep.max_atoms = cx.max_atoms();
    rep.generators_checked = cx.generator_count();
    for (int d : cx.degrees()) {
        const SparseMatrix dd = cx.differential(d + 1) * cx.differential(d);
        for (std::size_t c = 0; c < dd.ncols(); ++c)
            if (!dd.column(c).empty())
                rep.violations.push_back("d^2 a_" + to_string(cx.table().atom_set(cx.basis(d)[c])) + " != 0");
    }
    return rep;
}

CupLeibnizCase cup_leibniz_sides(const AtomSet& s, const AtomSet& t)
{
    CupLeibnizCase out{s, t, {}, {}};
    out.lhs = differential(cup(ChainElement(s), ChainElement(t)));
    const Rational sign = degree(s) % 2 ? Rational(-1) : Rational(1);
    out.rhs = cup(differential(s), ChainElement(t)) + sign * cup(ChainElement(s), differential(t));
    return out;
}

CupLeibnizReport verify_cup_leibniz(int k, int l, std::size_t trials, std::uint64_t seed)
{
    CupLeibnizReport rep;
    rep.k = k;
    rep.l = l;
    rep.trials = trials;
    rep.seed = seed;
    const std::vector<Atom> atoms = atoms_of(k, l);
    Rng rng(seed);
    auto draw = [&] {
        const std::size_t size = uniform_index(rng, std::min<std::size_t>(4, atoms.size() + 1));
        std::vector<Atom> pick;
        while (pick.size() < size) {
            const Atom& a = atoms[uniform_index(rng, atoms.size())];
            if (std::find(pick.begin(), pick.end(), a) == pick.end())
                pick.push_back(a);
        }
        return AtomSet(l, std::move(pick));
    };
    for (std::size_t i = 0; i < trials; ++i) {
        AtomSet s = draw();
        AtomSet t = draw();
        if (!cup(s, t).is_zero())
            ++rep.nonzero_products;
        CupLeibnizCase c = cup_leibniz_sides(s, t);
        if (!(c.lhs == c.rhs))
            rep.violations.push_back(std::move(c));
    }
    return rep;
}

std::string to_string(const ChainElement& c, const char* symbol)
{
    return render(c, [&](const AtomSet& s) { return std::string(symbol) + "_" + to_string(s); });
}

} // namespace klim
