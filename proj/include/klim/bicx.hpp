#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "klim/atomic.hpp"
#include "klim/limit.hpp"

namespace klim {

/// Removes the i-th core element (1-based, ascending) from every member with
/// sign (-1)^i. Sends b_{{x}} to -b_{{}}; the unit and empty cores go to 0.
LimitChain delta(const LimitIndex& b);
LimitChain delta(const LimitChain& c);

/// Every nonempty family of equal-size subsets of [n] with at most m members
/// (m = 0: no bound), in canonical order by member size then family.
std::vector<LimitIndex> families_within(int n, std::size_t m);

struct DeltaSquaredReport {
    int n = 0;
    std::size_t m = 0;
    std::size_t generators_checked = 0;
    std::vector<std::string> violations;
    bool passed() const noexcept { return violations.empty(); }
};

DeltaSquaredReport verify_delta_squared(int n, std::size_t m);

/// Label (i, L) of one simplicial summand: L is a family of i-sets with empty
/// common intersection, and i = 0 has the empty label.
struct SummandKey {
    std::size_t i = 0;
    std::vector<ElementSet> label;

    auto operator<=>(const SummandKey&) const = default;
};

std::string to_string(const SummandKey& key);

/// (q - |core|, halo), with the halo {{}} of a one-member family sent to the
/// empty label. The unit lies outside every summand and is rejected.
SummandKey summand_key(const LimitIndex& b);

using SimplexChain = Combination<ElementSet>;

/// Simplicial boundary with (-1)^i over 1-based positions; the empty simplex
/// is the (-1)-simplex and has zero boundary.
SimplexChain simplicial_boundary(const ElementSet& s);
SimplexChain simplicial_boundary(const SimplexChain& c);

/// Order-preserving relabelling of the positive integers outside `removed`.
int relabel(int x, const ElementSet& removed);
int unrelabel(int y, const ElementSet& removed);

std::pair<SummandKey, ElementSet> phi(const LimitIndex& b);
LimitIndex psi(const SummandKey& key, const ElementSet& simplex);

struct DecompositionReport {
    int n = 0;
    std::size_t m = 0;
    std::size_t generators_checked = 0;
    std::size_t summands = 0;
    std::size_t inverse_checks = 0;
    std::vector<std::string> violations;
    bool passed() const noexcept { return violations.empty(); }
};

DecompositionReport verify_decomposition(int n, std::size_t m);

struct SummandHomology {
    SummandKey key;
    ElementSet vertices;
    bool padded = false; ///< vertex set was empty inside [n]; used {n+1}
    std::size_t generators = 0;
    std::size_t homology = 0; ///< total over all degrees
};

struct ExactnessReport {
    int n = 0;
    std::size_t m = 0;
    std::size_t summands = 0;
    std::size_t padded = 0;
    std::size_t generators = 0;
    std::vector<SummandHomology> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Builds each summand complex on the vertices [n] \ union(L) from real
/// generators and delta, and checks it is exact. m bounds |L| (0: no bound).
ExactnessReport verify_delta_exactness(int n, std::size_t m, int jobs = 1);
SummandHomology summand_homology(const SummandKey& key, int n);

/// (|Lambda|, |core|); the unit is (0, 0).
std::pair<std::size_t, std::size_t> grading_mt(const LimitIndex& b);
/// (l - k + 1, |Lambda| + |core|) for b realized at stage (k, l).
std::pair<int, int> grading_mn(const LimitIndex& b, int k, int l);

enum class Commutation { commute, anticommute, mixed };
std::string to_string(Commutation c);

struct ColumnExactness {
    std::size_t m = 0;
    std::size_t generators = 0;
    std::map<std::size_t, std::size_t> homology; ///< t -> dim, nonzero only
};

struct DoubleComplexReport {
    int n = 0;
    std::size_t m = 0;
    std::size_t generators_checked = 0;
    std::size_t commuting = 0;     ///< d delta = delta d != 0
    std::size_t anticommuting = 0; ///< d delta = -delta d != 0
    std::size_t both_zero = 0;
    Commutation relation = Commutation::commute;
    std::vector<std::string> disagreements;
    std::vector<std::string> total_square_failures;
    std::vector<std::string> grading_failures;
    std::vector<ColumnExactness> columns;
    std::map<std::size_t, std::size_t> total_homology; ///< total degree -> dim, nonzero only
    std::size_t subcomplex_generators = 0;
    bool passed() const noexcept;
};

/// The total differential for the determined relation:
/// d + (-1)^{|Lambda|} delta when d and delta commute, d + delta otherwise.
LimitChain total_differential(const LimitIndex& b, Commutation relation);

DoubleComplexReport verify_double_complex(int n, std::size_t m, int jobs = 1);

struct VanishingCell {
    int degree = 0;
    int n = 0;
    std::size_t dimension = 0;
};

struct VanishingReport {
    int k = 0;
    int l = 0;
    int m = 0;
    bool in_range = false; ///< l >= 2k - 1
    std::vector<VanishingCell> support;
    std::vector<VanishingCell> violations;
    bool passed() const noexcept { return violations.empty(); }
};

/// Homology of A(k,l) without the unit, split by n = |S| + l - |union S|.
VanishingReport vanishing_check(int k, int l, int jobs = 1);

} // namespace klim
