#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "klim/atomic.hpp"
#include "klim/limit.hpp"

namespace klim {

enum class CompatReason { empty_operand, size_match_and_disjoint, size_mismatch, union_overlap };
std::string to_string(CompatReason r);

struct CompatPair {
    LimitIndex lhs;
    LimitIndex rhs;
    bool compatible = false;
    CompatReason reason = CompatReason::empty_operand;
};

CompatPair compatible(const LimitIndex& a, const LimitIndex& b);

/// Member-wise unions, pairing members in canonical order.
ComplementFamily uplus(const LimitIndex& a, const LimitIndex& b);

/// Number of inversions between the two cores.
std::size_t product_sign_count(const LimitIndex& a, const LimitIndex& b);

/// (-1)^eps b_{a uplus b} when compatible, else 0. The unit is two-sided.
LimitChain gproduct(const LimitIndex& a, const LimitIndex& b);
LimitChain gproduct(const LimitChain& a, const LimitChain& b);

struct AssociativityReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    int n = 0;
    std::size_t nonzero = 0;
    std::vector<std::string> violations;
    bool passed() const noexcept { return violations.empty(); }
};

AssociativityReport verify_associativity(std::size_t trials, std::uint64_t seed, int n);

enum class LeibnizClass { product_nonzero, size_mismatch, overlap_in_cores, outside_hypothesis };
std::string to_string(LeibnizClass c);
bool in_regime(LeibnizClass c);

LeibnizClass leibniz_classify(const LimitIndex& a, const LimitIndex& b);

struct LeibnizCase {
    LimitIndex lhs_index;
    LimitIndex rhs_index;
    LeibnizClass klass = LeibnizClass::product_nonzero;
    LimitChain lhs;       ///< delta(b_a b_b)
    LimitChain rhs;       ///< with sign (-1)^{|core a|}
    LimitChain rhs_shift; ///< with sign (-1)^{|core a| + 1}
    bool holds() const { return lhs == rhs; }
    bool holds_shift() const { return lhs == rhs_shift; }
};

LeibnizCase leibniz_check(const LimitIndex& a, const LimitIndex& b);

struct LeibnizReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    int n = 0;
    std::size_t per_class[3] = {0, 0, 0};
    std::size_t shift_failures = 0; ///< pairs where the opposite sign convention fails
    std::vector<LeibnizCase> failures;       ///< in-regime pairs where the identity fails
    std::vector<LeibnizCase> counterexamples; ///< the two catalogued pairs
    bool counterexamples_reproduced = false;
    bool passed() const noexcept { return failures.empty() && counterexamples_reproduced; }
};

/// Seeded in-regime pairs drawn round-robin over the three hypothesis classes,
/// plus the catalogued counterexamples.
LeibnizReport verify_leibniz(std::size_t trials, std::uint64_t seed, int n = 10);

struct DLeibnizCounterexample {
    LimitIndex lambda;
    LimitIndex gamma;
    LimitChain product;
    LimitChain d_product;
    LimitChain d_lambda;
    LimitChain d_gamma;
    LimitChain rhs; ///< d(b_L) b_G + b_L d(b_G), signs as printed are irrelevant here
    bool reproduced = false;
};

DLeibnizCounterexample d_leibniz_counterexample();
/// The delta counterexample {{1,2},{1,3}} x {{2,4},{2,5}}.
LeibnizCase delta_leibniz_counterexample();

struct SignWitness {
    std::size_t epsilon = 0;
    std::vector<std::size_t> positions_a; ///< 1-based rank of each core element of a in the merged core
    std::vector<std::size_t> positions_b;
    std::vector<std::size_t> gaps_a; ///< elements of b's core strictly between consecutive elements of a's core
    std::vector<std::size_t> gaps_b;
};

SignWitness sign_witness(const LimitIndex& a, const LimitIndex& b);

struct SignLemmaReport {
    std::size_t pairs = 0;
    std::size_t identities = 0;
    std::vector<std::string> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Inversion-count and parity identities over consecutive core positions, in both orders.
SignLemmaReport sign_lemmas_check(const LimitIndex& a, const LimitIndex& b);
/// sign_lemmas_check over every pair of disjoint nonempty cores inside [n].
SignLemmaReport sign_lemmas_exhaustive(int n);

struct StabilizationReport {
    int k = 0;
    int l = 0;
    std::size_t nonzero_pairs = 0;
    std::vector<std::string> surviving;     ///< cup products that did not vanish after stabilization
    std::vector<std::string> generator_misses; ///< generators whose image one stage up is not a generator
    std::vector<std::string> independence_losses;
    bool passed() const noexcept { return surviving.empty() && generator_misses.empty() && independence_losses.empty(); }
};

/// Pushes every nonzero cup pair of A(k,l) to A(k+1,l+1) and checks the cup
/// dies; also checks stabilization on book-shaped and independent sets.
StabilizationReport verify_stabilization(int k, int l);

} // namespace klim
