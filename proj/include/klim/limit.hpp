#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klim/atomic.hpp"
#include "klim/combination.hpp"
#include "klim/setcore.hpp"

namespace klim {

/// Index b_Lambda of the limit complexes, stored as the family together with
/// its core (common intersection) and halo {lambda \ core}.
///
/// The empty family is the product unit. The one-member family {{}} (q = 0)
/// is a different generator: it is the (-1)-simplex of the core-only summand.
class LimitIndex {
public:
    /// The unit.
    LimitIndex() = default;
    explicit LimitIndex(ComplementFamily family);
    /// Rebuilds {l u core : l in halo}; rejects pairs that are not canonical.
    static LimitIndex from_pair(ElementSet core, std::vector<ElementSet> halo);

    const ComplementFamily& family() const noexcept { return family_; }
    const std::vector<ElementSet>& members() const noexcept { return family_.members(); }
    const ElementSet& core() const noexcept { return core_; }
    /// Canonically sorted; {{}} for a one-member family, empty for the unit.
    const std::vector<ElementSet>& halo() const noexcept { return halo_; }

    bool is_unit() const noexcept { return family_.empty(); }
    std::size_t size() const noexcept { return family_.size(); }
    std::size_t q() const noexcept { return family_.member_size(); }

    friend bool operator==(const LimitIndex& a, const LimitIndex& b) { return a.family_ == b.family_; }
    friend auto operator<=>(const LimitIndex& a, const LimitIndex& b) { return a.family_ <=> b.family_; }

private:
    ComplementFamily family_;
    ElementSet core_;
    std::vector<ElementSet> halo_;
};

using LimitChain = Combination<LimitIndex>;

/// Canonical index of a literal family.
LimitIndex limit_index(std::vector<ElementSet> members);
LimitIndex canonicalize(const ComplementFamily& f);
std::string to_string(const LimitIndex& b);
std::string to_string(const LimitChain& c);

/// 2(|core| - 1) + |Lambda|; the unit has no codegree.
int codegree_limit(const LimitIndex& b);
/// 2|core| + |Lambda| - ceil((l-1)/(k-1)) for a family of (l-k)-sets.
int codegree_finite(const ComplementFamily& f, int k, int l);

/// Sum of (-1)^j b_{Lambda \ lambda_j} over the 1-based positions j whose
/// removal keeps the core.
LimitChain limit_d(const LimitIndex& b);
LimitChain limit_d(const LimitChain& c);

/// Atom set whose atoms share a (k-1)-element core, each adding one leaf.
struct TheoremGenerator {
    AtomSet s;
    ElementSet core;
    ElementSet leaves;
};

/// All book-shaped sets in A(k, q+k) with at least one leaf, one entry per
/// distinct atom set, ordered by atom set. Requires q <= k-1.
std::vector<TheoremGenerator> theorem_generators(int q, int k);

struct TildeMove {
    Atom sigma;
    Atom sigma_tilde;
    ElementSet filler;  ///< the chosen T
    AtomSet replaced;   ///< (S \ sigma) u sigma~
    bool identity = false;
    std::optional<AtomSet> witness; ///< S u sigma~, absent for the identity move
    ChainElement witness_boundary;
};

/// sigma~ = F(sigma) u (common intersection) u T with T the lexicographically
/// first subset of P that brings the size to k.
TildeMove tilde_replace(const AtomSet& s, const Atom& sigma, const ElementSet& p);

struct LimitClasses {
    int degree = 0;
    std::size_t dimension = 0;
    std::vector<ChainElement> representatives;
};

struct LimitHomology {
    int q = 0;
    int stage_k = 0;
    int l = 0;
    std::size_t unit_dimension = 0;
    std::map<int, LimitClasses> by_codegree; ///< nonzero only
};

/// Homology of A(stage_k, q + stage_k) without the unit, indexed by codegree.
LimitHomology limit_homology(int q, int stage_k, int jobs = 1);

struct GenerationRow {
    int codegree = 0;
    int degree = 0;
    std::size_t homology_dimension = 0;
    std::size_t generators = 0;
    std::size_t generator_rank = 0; ///< rank of generator classes modulo boundaries
    std::size_t uncovered = 0;      ///< representatives outside the span
    bool passed() const noexcept { return uncovered == 0; }
};

struct GenerationReport {
    int q = 0;
    int stage_k = 0;
    std::vector<GenerationRow> rows;
    std::vector<std::string> non_cycles; ///< generators that failed to be cycles
    bool passed() const noexcept;
};

GenerationReport verify_generation(int q, int stage_k, int jobs = 1);

} // namespace klim
