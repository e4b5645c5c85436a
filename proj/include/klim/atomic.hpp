#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "klim/combination.hpp"
#include "klim/ratlin.hpp"
#include "klim/setcore.hpp"

namespace klim {

using ChainElement = Combination<AtomSet>;

/// Bit i set <=> the i-th atom (lexicographic order) of A(k,l) is present.
using AtomMask = std::uint64_t;

/// The atoms of A(k,l) together with element bitmasks; the index space for AtomMask.
class AtomTable {
public:
    static constexpr int max_ambient = 16;
    static constexpr std::size_t max_atoms = 63;

    AtomTable(int k, int l);

    int k() const noexcept { return k_; }
    int l() const noexcept { return l_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    std::size_t index_of(const Atom& a) const;
    AtomMask mask_of(const AtomSet& s) const;
    AtomSet atom_set(AtomMask m) const;

    /// Canonical encoding of the closure partition of the atoms in m (4 bits per element).
    std::uint64_t flat_key(AtomMask m) const;
    int codim(AtomMask m) const;
    int degree(AtomMask m) const;
    /// Union of the atoms' elements as a bitmask over [l] (bit x-1 for element x).
    std::uint32_t support(AtomMask m) const;

private:
    int k_;
    int l_;
    std::vector<Atom> atoms_;
    std::vector<std::uint32_t> element_masks_;
};

/// 2 codim X(S) - |S|
int degree(const AtomSet& s);
/// Sum of (-1)^j a_{S \ sigma_j} over the 1-based positions j whose removal keeps X(S).
ChainElement differential(const AtomSet& s);
ChainElement differential(const ChainElement& c);
/// (-1)^eps(S,T) a_{S u T} when codimensions add, else 0.
ChainElement cup(const AtomSet& s, const AtomSet& t);
ChainElement cup(const ChainElement& a, const ChainElement& b);

/// 2(l-1) - ceil((l-1)/(k-1))
int maximal_degree(int k, int l);

inline constexpr std::size_t default_generator_ceiling = std::size_t{1} << 17;

struct BuildOptions {
    std::optional<std::size_t> max_atoms;
    std::size_t generator_ceiling = default_generator_ceiling;
};

/// Number of generators build_complex would create.
std::size_t generator_count(int k, int l, std::optional<std::size_t> max_atoms);

class FiniteComplex {
public:
    int k() const noexcept { return table_.k(); }
    int l() const noexcept { return table_.l(); }
    std::optional<std::size_t> max_atoms() const noexcept { return max_atoms_; }
    const AtomTable& table() const noexcept { return table_; }

    /// Degrees carrying at least one generator, ascending.
    std::vector<int> degrees() const;
    /// Generators of one degree in canonical order (empty if none).
    const std::vector<AtomMask>& basis(int degree) const;
    std::size_t dimension(int degree) const { return basis(degree).size(); }
    std::size_t generator_count() const noexcept { return index_.size(); }
    /// d: C^degree -> C^{degree+1}, shaped dim(degree+1) x dim(degree).
    const SparseMatrix& differential(int degree) const;
    std::optional<std::size_t> index_of(AtomMask m) const;

    /// False when a --max-atoms cut can change homology in this degree.
    bool determinate(int degree) const { return !affected_.contains(degree); }
    const std::set<int>& indeterminate_degrees() const noexcept { return affected_; }

    SparseVector to_vector(const ChainElement& c, int degree) const;
    ChainElement to_chain(const SparseVector& v, int degree) const;

private:
    explicit FiniteComplex(AtomTable table) : table_(std::move(table)) {}
    friend FiniteComplex assemble_complex(int k, int l, const BuildOptions& opts);

    AtomTable table_;
    std::optional<std::size_t> max_atoms_;
    std::map<int, std::vector<AtomMask>> basis_;
    std::map<int, SparseMatrix> diff_;
    std::unordered_map<AtomMask, std::size_t> index_;
    std::set<int> affected_;
};

/// Builds generators and differentials without the d^2 check.
FiniteComplex assemble_complex(int k, int l, const BuildOptions& opts = {});
/// assemble_complex followed by a d^2 = 0 check (throws VerificationFailure).
FiniteComplex build_complex(int k, int l, const BuildOptions& opts = {});

struct BettiTable {
    int k = 0;
    int l = 0;
    std::optional<std::size_t> max_atoms;
    std::map<int, std::size_t> by_degree; ///< nonzero dimensions only
    std::set<int> indeterminate;
};

BettiTable betti(const FiniteComplex& cx, int jobs = 1);
BettiTable betti(int k, int l, const BuildOptions& opts = {}, int jobs = 1);

/// Right multiplication by A_{1,1}: sigma -> sigma u {l+1}.
AtomSet stabilize(const AtomSet& s, int k, int l);
/// sigma u (tau shifted by l); lands in [l+m].
ElementSet monoid_product(const ElementSet& sigma, int l, const ElementSet& tau, int m);

struct DSquaredReport {
    int k = 0;
    int l = 0;
    std::optional<std::size_t> max_atoms;
    std::size_t generators_checked = 0;
    std::vector<std::string> violations;

    bool passed() const noexcept { return violations.empty(); }
};

DSquaredReport verify_d_squared(int k, int l, const BuildOptions& opts = {});

struct CupLeibnizCase {
    AtomSet s;
    AtomSet t;
    ChainElement lhs;
    ChainElement rhs;
};

/// Both sides of d(a_S a_T) = d(a_S) a_T + (-1)^{deg a_S} a_S d(a_T).
CupLeibnizCase cup_leibniz_sides(const AtomSet& s, const AtomSet& t);

struct CupLeibnizReport {
    int k = 0;
    int l = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t nonzero_products = 0;
    std::vector<CupLeibnizCase> violations;

    bool passed() const noexcept { return violations.empty(); }
};

CupLeibnizReport verify_cup_leibniz(int k, int l, std::size_t trials, std::uint64_t seed);

std::string to_string(const ChainElement& c, const char* symbol = "a");

} // namespace klim
