// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>

#include "../unit/oracles.hpp"
#include "klim/atomic.hpp"
#include "klim/bicx.hpp"
#include "klim/cli.hpp"
#include "klim/gprod.hpp"
#include "klim/limit.hpp"

using namespace klim;

namespace {

int jobs()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct Verdict {
    bool ok = true;
    std::string detail;
};

// d^2 on bitmask generators, from scratch: codim via oracle::component_count.
std::size_t oracle_d_squared(int k, int l, std::size_t max_size, std::size_t& checked)
{
    std::vector<std::vector<int>> atoms;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int next) {
        if (static_cast<int>(cur.size()) == k) {
            atoms.push_back(cur);
            return;
        }
        for (int x = next; x <= l; ++x) {
            cur.push_back(x);
            rec(x + 1);
            cur.pop_back();
        }
    };
    rec(1);
    const std::size_t na = atoms.size();
    auto codim = [&](std::uint64_t s) {
        std::vector<std::vector<int>> edges;
        for (std::size_t i = 0; i < na; ++i)
            if (s >> i & 1)
                edges.push_back(atoms[i]);
        return l - oracle::component_count(l, edges);
    };
    auto d = [&](std::uint64_t s, long coeff, std::unordered_map<std::uint64_t, long>& out) {
        const int c = codim(s);
        int pos = 0;
        for (std::size_t i = 0; i < na; ++i) {
            if (!(s >> i & 1))
                continue;
            ++pos;
            const std::uint64_t t = s & ~(std::uint64_t{1} << i);
            if (codim(t) == c)
                out[t] += pos % 2 ? -coeff : coeff;
        }
    };
    std::size_t bad = 0;
    checked = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << na); ++s) {
        if (static_cast<std::size_t>(std::popcount(s)) > max_size)
            continue;
        ++checked;
        std::unordered_map<std::uint64_t, long> once, twice;
        d(s, 1, once);
        for (const auto& [t, c] : once)
            if (c)
                d(t, c, twice);
        for (const auto& [t, c] : twice)
            if (c) {
                ++bad;
                break;
            }
    }
    return bad;
}

Verdict criterion1()
{
    struct Case {
        int k, l;
        std::optional<std::size_t> bound;
    };
    const Case cases[] = {{2, 3, {}}, {2, 4, {}}, {2, 5, {}}, {3, 5, {}}, {4, 6, {}}, {3, 6, 6}};
    Verdict v;
    std::ostringstream s;
    for (const Case& c : cases) {
        BuildOptions o;
        o.max_atoms = c.bound;
        const DSquaredReport r = verify_d_squared(c.k, c.l, o);
        std::size_t checked = 0;
        const std::size_t bad = oracle_d_squared(c.k, c.l, c.bound.value_or(64), checked);
        v.ok = v.ok && r.passed() && bad == 0 && checked == r.generators_checked;
        s << "A(" << c.k << "," << c.l << (c.bound ? ",<=" + std::to_string(*c.bound) : "") << "):"
          << r.generators_checked << " ";
    }
    v.detail = s.str() + "generators, library and oracle agree";
    return v;
}

Verdict criterion2()
{
    Verdict v;
    for (int l = 3; l <= 5; ++l) {
        const BettiTable t = betti(2, l, {}, jobs());
        const auto want = oracle::braid_poincare(l);
        v.ok = v.ok && t.indeterminate.empty() && t.by_degree == want;
        v.detail += "l=" + std::to_string(l) + (t.by_degree == want ? " ok " : " MISMATCH ");
    }
    return v;
}

Verdict criterion3()
{
    const DeltaSquaredReport r = verify_delta_squared(6, 3);
    return {r.violations.empty(), std::to_string(r.generators_checked) + " generators, union within [6], |family| <= 3"};
}

Verdict criterion4()
{
    const DecompositionReport r = verify_decomposition(6, 3);
    return {r.violations.empty() && r.inverse_checks > 0,
            std::to_string(r.generators_checked) + " generators, " + std::to_string(r.summands) + " summands, " +
                std::to_string(r.inverse_checks) + " inverse checks"};
}

Verdict criterion5()
{
    const ExactnessReport r = verify_delta_exactness(6, 0, jobs());
    return {r.passed() && r.summands > 0,
            std::to_string(r.summands) + " summands (" + std::to_string(r.padded) + " padded), " +
                std::to_string(r.failures.size()) + " with homology"};
}

Verdict criterion6()
{
    const DoubleComplexReport r = verify_double_complex(6, 3, jobs());
    bool columns_zero = true;
    for (const ColumnExactness& c : r.columns)
        columns_zero = columns_zero && c.homology.empty();
    const bool uniform = r.relation != Commutation::mixed && (r.commuting == 0 || r.anticommuting == 0);
    return {uniform && r.total_square_failures.empty() && columns_zero && r.disagreements.empty(),
            "relation " + to_string(r.relation) + " (" + std::to_string(r.commuting) + " nonzero, " +
                std::to_string(r.both_zero) + " both zero), total d^2 = 0, " + std::to_string(r.columns.size()) +
                " columns exact"};
}

Verdict criterion7()
{
    Verdict v;
    const std::pair<int, int> cases[] = {{1, 2}, {1, 3}, {2, 3}, {2, 4}};
    const auto start = std::chrono::steady_clock::now();
    for (const auto& [q, sk] : cases) {
        const GenerationReport r = verify_generation(q, sk, jobs());
        v.ok = v.ok && r.passed();
        v.detail += "(" + std::to_string(q) + "," + std::to_string(sk) + (r.passed() ? ") ok " : ") FAIL ");
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.ok = v.ok && s < 600;
    return v;
}

Verdict criterion8()
{
    const LeibnizReport r = verify_leibniz(200, 0, 10);
    const std::size_t in_regime = r.per_class[0] + r.per_class[1] + r.per_class[2];
    const LeibnizCase first = delta_leibniz_counterexample();
    const DLeibnizCounterexample second = d_leibniz_counterexample();
    const LimitIndex t1 = limit_index({{1, 2, 4}, {1, 3, 5}});
    const LimitIndex t2 = limit_index({{1, 2, 6}, {3, 4, 7}});
    const bool ce = first.lhs.is_zero() && first.rhs.coefficient(t1) != 0 && second.d_product.is_zero() &&
                    second.rhs.coefficient(t2) != 0;
    return {r.passed() && in_regime == 200 && ce,
            std::to_string(in_regime) + " in-regime pairs, " + std::to_string(r.failures.size()) +
                " failures; counterexamples " + (ce ? "reproduced" : "NOT reproduced")};
}

Verdict criterion9()
{
    const SignLemmaReport r = sign_lemmas_exhaustive(8);
    return {r.passed(), std::to_string(r.pairs) + " core pairs in [8], " + std::to_string(r.identities) + " identities"};
}

Verdict criterion10()
{
    Verdict v;
    const std::pair<int, int> cases[] = {{2, 3}, {2, 4}, {3, 5}};
    for (const auto& [k, l] : cases) {
        const VanishingReport r = vanishing_check(k, l, jobs());
        v.ok = v.ok && r.passed();
        v.detail += "A(" + std::to_string(k) + "," + std::to_string(l) + "):" + std::to_string(r.support.size()) +
                    " cells" + (r.passed() ? " " : " VIOLATED ");
    }
    return v;
}

std::string payload_of(std::vector<std::string> args)
{
    args.insert(args.begin(), "klim");
    args.insert(args.end(), {"--format", "json"});
    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0)
        return "exit!=0";
    return nlohmann::json::parse(out.str())["payload"].dump();
}

Verdict criterion11()
{
    const std::vector<std::vector<std::string>> cmds = {
        {"betti", "--k", "2", "--l", "5"},
        {"betti", "--k", "3", "--l", "6", "--max-atoms", "5"},
        {"limit", "--q", "2", "--stage-k", "3"},
        {"verify", "leibniz", "--trials", "200", "--seed", "0"},
        {"verify", "assoc", "--trials", "300", "--seed", "5"},
        {"verify", "cup-leibniz", "--k", "2", "--l", "5", "--seed", "3"},
        {"verify", "bicomplex", "--n", "6", "--m", "3"},
        {"verify", "exactness", "--n", "5", "--m", "0"},
        {"verify", "vanishing", "--k", "3", "--l", "5"},
        {"product", "--op", "graded", "--lhs", "[[1,2],[3,4]]", "--rhs", "[[6],[7]]"},
    };
    Verdict v;
    std::size_t same = 0;
    for (const auto& c : cmds) {
        std::vector<std::string> c1 = c, c4 = c;
        c1.insert(c1.end(), {"--jobs", "1"});
        c4.insert(c4.end(), {"--jobs", "4"});
        const std::string a = payload_of(c1), b = payload_of(c1), x = payload_of(c4);
        if (a == b && a == x && a != "exit!=0")
            ++same;
        else
            v.ok = false;
    }
    v.detail = std::to_string(same) + "/" + std::to_string(cmds.size()) + " commands byte-identical across runs and --jobs 1/4";
    return v;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"d^2 = 0 on finite complexes", criterion1},
        {"braid Betti numbers", criterion2},
        {"delta^2 = 0", criterion3},
        {"summand decomposition", criterion4},
        {"summand exactness", criterion5},
        {"double complex", criterion6},
        {"limit homology generation", criterion7},
        {"conditional Leibniz rule", criterion8},
        {"sign identities", criterion9},
        {"vanishing support m >= n", criterion10},
        {"determinism", criterion11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2zu %s  %s: %s (%.1fs)\n", i + 1, v.ok ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str(), s);
        std::fflush(stdout);
        failed += v.ok ? 0 : 1;
    }
    return failed ? 1 : 0;
}
