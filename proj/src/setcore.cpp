#include "klim/setcore.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <sstream>

namespace klim {

bool is_strict_set(const ElementSet& s)
{
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i])
            return false;
    return true;
}

ElementSet set_union(const ElementSet& a, const ElementSet& b)
{
    ElementSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b)
{
    ElementSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b)
{
    ElementSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const ElementSet& a, const ElementSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool is_disjoint(const ElementSet& a, const ElementSet& b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return false;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return true;
}

ElementSet interval(int lo, int hi)
{
    ElementSet out;
    for (int x = lo; x <= hi; ++x)
        out.push_back(x);
    return out;
}

std::string to_string(const ElementSet& s)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i)
        os << (i ? "," : "") << s[i];
    os << '}';
    return os.str();
}

Atom::Atom(ElementSet elements) : elements_(std::move(elements))
{
    std::sort(elements_.begin(), elements_.end());
    if (elements_.empty())
        throw InvalidInput("atom must be non-empty");
    if (elements_.front() < 1)
        throw InvalidInput("atom elements must be positive: " + klim::to_string(elements_));
    if (!is_strict_set(elements_))
        throw InvalidInput("atom has repeated elements: " + klim::to_string(elements_));
}

bool Atom::contains(int x) const
{
    return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::string to_string(const Atom& a)
{
    return to_string(a.elements());
}

AtomSet::AtomSet(int ambient, std::vector<Atom> atoms) : ambient_(ambient), atoms_(std::move(atoms))
{
    if (ambient_ < 1)
        throw InvalidInput("ambient dimension must be positive");
    std::sort(atoms_.begin(), atoms_.end());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i && atoms_[i - 1] == atoms_[i])
            throw InvalidInput("duplicate atom " + to_string(atoms_[i]));
        if (atoms_[i].max_element() > ambient_)
            throw InvalidInput("atom " + to_string(atoms_[i]) + " exceeds ambient " + std::to_string(ambient_));
        if (atoms_[i].arity() != atoms_.front().arity())
            throw InvalidInput("atoms of mixed arity");
    }
}

bool AtomSet::contains(const Atom& a) const
{
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

std::size_t AtomSet::position(const Atom& a) const
{
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a)
        throw InvalidInput("atom " + to_string(a) + " not in set");
    return static_cast<std::size_t>(it - atoms_.begin()) + 1;
}

AtomSet AtomSet::without(const Atom& a) const
{
    std::vector<Atom> rest;
    rest.reserve(atoms_.size());
    for (const Atom& b : atoms_)
        if (b != a)
            rest.push_back(b);
    return AtomSet(ambient_, std::move(rest));
}

AtomSet AtomSet::with(const Atom& a) const
{
    std::vector<Atom> more = atoms_;
    more.push_back(a);
    return AtomSet(ambient_, std::move(more));
}

std::string to_string(const AtomSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? "," : "") + to_string(s.atoms()[i]);
    return out + "}";
}

ComplementFamily::ComplementFamily(std::vector<ElementSet> members) : members_(std::move(members))
{
    for (ElementSet& m : members_) {
        std::sort(m.begin(), m.end());
        if (!is_strict_set(m))
            throw InvalidInput("family member has repeated elements: " + to_string(m));
        if (!m.empty() && m.front() < 1)
            throw InvalidInput("family member elements must be positive: " + to_string(m));
    }
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i && members_[i - 1] == members_[i])
            throw InvalidInput("duplicate family member " + to_string(members_[i]));
        if (members_[i].size() != members_.front().size())
            throw InvalidInput("family members of unequal size");
    }
}

int ComplementFamily::max_element() const noexcept
{
    int m = 0;
    for (const ElementSet& s : members_)
        if (!s.empty())
            m = std::max(m, s.back());
    return m;
}

ElementSet ComplementFamily::intersection() const
{
    if (members_.empty())
        return {};
    ElementSet out = members_.front();
    for (std::size_t i = 1; i < members_.size(); ++i)
        out = set_intersection(out, members_[i]);
    return out;
}

ElementSet ComplementFamily::union_all() const
{
    ElementSet out;
    for (const ElementSet& m : members_)
        out = set_union(out, m);
    return out;
}

std::string to_string(const ComplementFamily& f)
{
    std::string out = "{";
    for (std::size_t i = 0; i < f.size(); ++i)
        out += (i ? "," : "") + to_string(f.members()[i]);
    return out + "}";
}

std::vector<ElementSet> subsets_of_size(const ElementSet& ground, std::size_t r)
{
    std::vector<ElementSet> out;
    if (r > ground.size())
        return out;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        ElementSet s;
        s.reserve(r);
        for (std::size_t i : idx)
            s.push_back(ground[i]);
        out.push_back(std::move(s));
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == ground.size() - r + i - 1)
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<Atom> atoms_of(int k, int ambient)
{
    if (k < 2 || k > ambient)
        throw InvalidInput("invalid arrangement: need 2 <= k <= l, got k=" + std::to_string(k) +
                           " l=" + std::to_string(ambient));
    std::vector<Atom> out;
    for (ElementSet& s : subsets_of_size(interval(1, ambient), static_cast<std::size_t>(k)))
        out.emplace_back(std::move(s));
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n) + 1)
    {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    // The smaller root wins, so every root is its block's minimum.
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (a < b)
            parent[b] = a;
        else
            parent[a] = b;
    }
};

} // namespace

Partition closure_partition(const AtomSet& s)
{
    const int l = s.ambient();
    UnionFind uf(l);
    for (const Atom& a : s)
        for (int x : a.elements())
            uf.unite(a.elements().front(), x);
    std::vector<ElementSet> by_root(static_cast<std::size_t>(l) + 1);
    for (int x = 1; x <= l; ++x)
        by_root[uf.find(x)].push_back(x);
    Partition p;
    for (ElementSet& b : by_root)
        if (!b.empty())
            p.blocks.push_back(std::move(b));
    return p;
}

int codim(const AtomSet& s)
{
    return s.ambient() - static_cast<int>(closure_partition(s).blocks.size());
}

ElementSet union_of(const AtomSet& s)
{
    ElementSet out;
    for (const Atom& a : s)
        out = set_union(out, a.elements());
    return out;
}

ElementSet intersection_of(const AtomSet& s)
{
    if (s.empty())
        return {};
    ElementSet out = s.atoms().front().elements();
    for (const Atom& a : s)
        out = set_intersection(out, a.elements());
    return out;
}

ComplementFamily complement(const AtomSet& s)
{
    const ElementSet all = interval(1, s.ambient());
    std::vector<ElementSet> members;
    members.reserve(s.size());
    for (const Atom& a : s)
        members.push_back(set_difference(all, a.elements()));
    return ComplementFamily(std::move(members));
}

AtomSet complement(const ComplementFamily& f, int ambient)
{
    if (f.max_element() > ambient)
        throw InvalidInput("family " + to_string(f) + " does not fit in [" + std::to_string(ambient) + "]");
    const ElementSet all = interval(1, ambient);
    std::vector<Atom> atoms;
    for (const ElementSet& m : f)
        atoms.emplace_back(set_difference(all, m));
    return AtomSet(ambient, std::move(atoms));
}

ElementSet free_vertices(const Atom& sigma, const AtomSet& s)
{
    if (!s.contains(sigma))
        throw InvalidInput("free_vertices: " + to_string(sigma) + " is not in " + to_string(s));
    ElementSet others;
    for (const Atom& t : s)
        if (t != sigma)
            others = set_union(others, t.elements());
    return set_difference(sigma.elements(), others);
}

std::vector<ElementSet> pset_candidates(const AtomSet& s, int k)
{
    std::vector<ElementSet> out;
    if (s.empty() || k < 2)
        return out;
    const ElementSet core = intersection_of(s);
    std::vector<ElementSet> free;
    for (const Atom& a : s)
        free.push_back(free_vertices(a, s));
    for (ElementSet& p : subsets_of_size(union_of(s), static_cast<std::size_t>(k - 1))) {
        if (!is_subset(core, p))
            continue;
        bool ok = true;
        for (const ElementSet& f : free)
            if (set_difference(f, p).empty()) {
                ok = false;
                break;
            }
        if (ok)
            out.push_back(std::move(p));
    }
    return out;
}

bool is_independent(const AtomSet& s)
{
    const Partition full = closure_partition(s);
    for (const Atom& a : s)
        if (closure_partition(s.without(a)) == full)
            return false;
    return true;
}

} // namespace klim
