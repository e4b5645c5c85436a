#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "klim/error.hpp"

namespace klim {

/// Strictly increasing list of positive integers.
using ElementSet = std::vector<int>;

bool is_strict_set(const ElementSet& s);
ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);
bool is_subset(const ElementSet& a, const ElementSet& b);
bool is_disjoint(const ElementSet& a, const ElementSet& b);
/// [lo, hi] as an ElementSet; empty when hi < lo.
ElementSet interval(int lo, int hi);
std::string to_string(const ElementSet& s);

/// A k-subset sigma of [l]; identifies the diagonal subspace X(sigma).
class Atom {
public:
    /// Sorts the input; rejects duplicates, non-positive elements and the empty set.
    explicit Atom(ElementSet elements);

    const ElementSet& elements() const noexcept { return elements_; }
    std::size_t arity() const noexcept { return elements_.size(); }
    int max_element() const noexcept { return elements_.back(); }
    bool contains(int x) const;

    auto operator<=>(const Atom&) const = default;

private:
    ElementSet elements_;
};

std::string to_string(const Atom& a);

/// Canonically (lexicographically) ordered, duplicate-free set of atoms of one
/// arity inside [ambient].
class AtomSet {
public:
    explicit AtomSet(int ambient, std::vector<Atom> atoms = {});

    int ambient() const noexcept { return ambient_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    /// Common arity of the atoms, 0 for the empty set.
    std::size_t arity() const noexcept { return atoms_.empty() ? 0 : atoms_.front().arity(); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    auto begin() const noexcept { return atoms_.begin(); }
    auto end() const noexcept { return atoms_.end(); }

    bool contains(const Atom& a) const;
    /// 1-based position of `a` in canonical order.
    std::size_t position(const Atom& a) const;
    AtomSet without(const Atom& a) const;
    AtomSet with(const Atom& a) const;

    auto operator<=>(const AtomSet&) const = default;

private:
    int ambient_;
    std::vector<Atom> atoms_;
};

std::string to_string(const AtomSet& s);

/// Set partition of [l] with sorted blocks listed in order of their minima.
struct Partition {
    std::vector<ElementSet> blocks;

    auto operator<=>(const Partition&) const = default;
};

/// Family of equal-size subsets (lambda_j = sigma_j^c), canonical and duplicate-free.
class ComplementFamily {
public:
    ComplementFamily() = default;
    explicit ComplementFamily(std::vector<ElementSet> members);

    const std::vector<ElementSet>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    /// Common member cardinality q (0 for the empty family).
    std::size_t member_size() const noexcept { return members_.empty() ? 0 : members_.front().size(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    /// Largest element of any member, 0 if there is none.
    int max_element() const noexcept;
    ElementSet intersection() const;
    ElementSet union_all() const;

    auto operator<=>(const ComplementFamily&) const = default;

private:
    std::vector<ElementSet> members_;
};

std::string to_string(const ComplementFamily& f);

std::vector<Atom> atoms_of(int k, int ambient);
Partition closure_partition(const AtomSet& s);
int codim(const AtomSet& s);
ElementSet union_of(const AtomSet& s);
/// Common intersection of the atoms; empty for the empty set.
ElementSet intersection_of(const AtomSet& s);
ComplementFamily complement(const AtomSet& s);
AtomSet complement(const ComplementFamily& f, int ambient);
ElementSet free_vertices(const Atom& sigma, const AtomSet& s);
std::vector<ElementSet> pset_candidates(const AtomSet& s, int k);
bool is_independent(const AtomSet& s);

/// All size-r subsets of `ground` in lexicographic order.
std::vector<ElementSet> subsets_of_size(const ElementSet& ground, std::size_t r);

/// Number of pairs (a, b) in A x B with b < a, i.e. the transpositions needed to
/// move every element of B behind every element of A. Inputs must be sorted and
/// disjoint.
template <class T>
std::size_t inversion_count(const std::vector<T>& a, const std::vector<T>& b)
{
    std::size_t count = 0;
    std::size_t i = 0;
    for (const T& y : b) {
        while (i < a.size() && a[i] < y)
            ++i;
        if (i < a.size() && !(y < a[i]))
            throw InvalidInput("inversion_count: inputs are not disjoint");
        count += a.size() - i;
    }
    return count;
}

} // namespace klim
