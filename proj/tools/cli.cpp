#include "klim/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "klim/atomic.hpp"
#include "klim/bicx.hpp"
#include "klim/error.hpp"
#include "klim/gprod.hpp"
#include "klim/limit.hpp"

#ifndef KLIM_VERSION
#define KLIM_VERSION "0.0.0"
#endif

namespace klim::cli {

using nlohmann::json;
namespace fs = std::filesystem;
using klim::to_string;

namespace {

template <class T>
json opt(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

int need(const std::optional<int>& v, const char* flag)
{
    if (!v)
        throw InvalidInput(std::string("missing required flag ") + flag);
    return *v;
}

int need_positive(const std::optional<int>& v, const char* flag)
{
    const int x = need(v, flag);
    if (x <= 0)
        throw InvalidInput(std::string(flag) + " must be positive");
    return x;
}

json strings(const std::vector<std::string>& v)
{
    return json(v);
}

std::string rational_text(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- literal parsing --------------------------------------------------------

std::vector<ElementSet> parse_sets(const std::string& text, const char* what)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception&) {
        throw InvalidInput(std::string("cannot parse ") + what + " literal '" + text + "'");
    }
    if (!j.is_array())
        throw InvalidInput(std::string(what) + " literal must be a list like [[1,2],[1,3]]");
    // a flat list is read as a single set
    if (!j.empty() && !j.front().is_array())
        j = json::array({j});
    std::vector<ElementSet> out;
    for (const json& member : j) {
        if (!member.is_array())
            throw InvalidInput(std::string(what) + " literal mixes sets and integers");
        ElementSet s;
        for (const json& x : member) {
            if (!x.is_number_integer())
                throw InvalidInput(std::string(what) + " literal contains a non-integer");
            s.push_back(x.get<int>());
        }
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    return out;
}

// --- commands ----------------------------------------------------------------

BuildOptions build_options(const Config& c)
{
    BuildOptions o;
    o.max_atoms = c.max_atoms;
    return o;
}

Outcome cmd_betti(const Config& c, std::string* matrices)
{
    const int k = need_positive(c.k, "--k");
    const int l = need_positive(c.l, "--l");
    const FiniteComplex cx = build_complex(k, l, build_options(c));
    const BettiTable t = betti(cx, c.jobs);
    const int maxdeg = maximal_degree(k, l);

    std::set<int> degrees;
    for (const auto& [d, h] : t.by_degree)
        degrees.insert(d);
    degrees.insert(t.indeterminate.begin(), t.indeterminate.end());
    json rows = json::array();
    for (int d : degrees) {
        const auto it = t.by_degree.find(d);
        const bool det = !t.indeterminate.contains(d);
        rows.push_back({{"degree", d},
                        {"codegree", maxdeg - d},
                        {"dimension", det ? json(it == t.by_degree.end() ? 0 : it->second) : json(nullptr)},
                        {"determinate", det}});
    }
    Outcome o;
    o.payload = {{"k", k},
                 {"l", l},
                 {"max_atoms", opt(c.max_atoms)},
                 {"generators", cx.generator_count()},
                 {"max_degree", maxdeg},
                 {"rows", rows},
                 {"indeterminate", json(std::vector<int>(t.indeterminate.begin(), t.indeterminate.end()))}};
    o.verdict = t.indeterminate.empty() ? Verdict::pass : Verdict::indeterminate;

    if (matrices) {
        std::ostringstream m;
        m << "# klim differential triplets: row col num/den\n";
        for (int d : cx.degrees()) {
            const SparseMatrix& dm = cx.differential(d);
            m << "degree " << d << " rows " << dm.nrows() << " cols " << dm.ncols() << "\n";
            for (const auto& [r, col, v] : dm.triplets())
                m << r << " " << col << " " << rational_text(v) << "\n";
        }
        *matrices = m.str();
    }
    return o;
}

Outcome cmd_limit(const Config& c)
{
    const int q = need(c.q, "--q");
    const int sk = need(c.stage_k, "--stage-k");
    const LimitHomology h = limit_homology(q, sk, c.jobs);
    const GenerationReport g = verify_generation(q, sk, c.jobs);

    // dimensions by degree, the unit first
    std::map<int, std::size_t> by_degree{{0, h.unit_dimension}};
    for (const auto& [codeg, cls] : h.by_codegree)
        by_degree[cls.degree] += cls.dimension;
    std::vector<std::size_t> dims;
    for (const auto& [d, n] : by_degree)
        dims.push_back(n);

    json rows = json::array();
    for (const GenerationRow& r : g.rows)
        rows.push_back({{"codegree", r.codegree},
                        {"degree", r.degree},
                        {"dimension", r.homology_dimension},
                        {"generators", r.generators},
                        {"generator_rank", r.generator_rank},
                        {"uncovered", r.uncovered}});
    Outcome o;
    o.payload = {{"q", q},
                 {"stage_k", sk},
                 {"l", h.l},
                 {"unit_dimension", h.unit_dimension},
                 {"dimensions_by_degree", dims},
                 {"rows", rows},
                 {"non_cycles", strings(g.non_cycles)},
                 {"generation_passed", g.passed()}};
    o.verdict = g.passed() ? Verdict::pass : Verdict::fail;
    return o;
}

json leibniz_case(const LeibnizCase& c)
{
    return {{"lambda", to_string(c.lhs_index)},
            {"gamma", to_string(c.rhs_index)},
            {"class", to_string(c.klass)},
            {"lhs", to_string(c.lhs)},
            {"rhs", to_string(c.rhs)},
            {"rhs_opposite_sign", to_string(c.rhs_shift)},
            {"holds", c.holds()}};
}

json cells(const std::vector<VanishingCell>& v)
{
    json out = json::array();
    for (const VanishingCell& c : v)
        out.push_back({{"degree", c.degree}, {"n", c.n}, {"dimension", c.dimension}});
    return out;
}

json graded(const std::map<std::size_t, std::size_t>& m, const char* key)
{
    json out = json::array();
    for (const auto& [t, d] : m)
        out.push_back({{key, t}, {"dimension", d}});
    return out;
}

Outcome cmd_verify(const Config& c)
{
    const std::string& what = c.check;
    const int n = c.n.value_or(6);
    const auto m = static_cast<std::size_t>(c.m.value_or(3));
    if (c.n && *c.n <= 0)
        throw InvalidInput("--n must be positive");
    if (c.m && *c.m < 0)
        throw InvalidInput("--m must be non-negative");
    Outcome o;
    bool ok = true;
    if (what == "d2") {
        const DSquaredReport r = verify_d_squared(need_positive(c.k, "--k"), need_positive(c.l, "--l"), build_options(c));
        o.payload = {{"k", r.k}, {"l", r.l}, {"max_atoms", opt(r.max_atoms)},
                     {"generators_checked", r.generators_checked}, {"violations", strings(r.violations)}};
        ok = r.passed();
    } else if (what == "delta2") {
        const DeltaSquaredReport r = verify_delta_squared(n, m);
        o.payload = {{"n", r.n}, {"m", r.m}, {"generators_checked", r.generators_checked},
                     {"violations", strings(r.violations)}};
        ok = r.violations.empty();
    } else if (what == "decomp") {
        const DecompositionReport r = verify_decomposition(n, m);
        o.payload = {{"n", r.n}, {"m", r.m}, {"generators_checked", r.generators_checked}, {"summands", r.summands},
                     {"inverse_checks", r.inverse_checks}, {"violations", strings(r.violations)}};
        ok = r.violations.empty();
    } else if (what == "exactness") {
        const ExactnessReport r = verify_delta_exactness(n, m, c.jobs);
        json failures = json::array();
        for (const SummandHomology& s : r.failures)
            failures.push_back({{"key", to_string(s.key)}, {"homology", s.homology}, {"generators", s.generators}});
        o.payload = {{"n", r.n}, {"m", r.m}, {"summands", r.summands}, {"padded", r.padded},
                     {"generators", r.generators}, {"failures", failures}};
        ok = r.passed();
    } else if (what == "bicomplex") {
        const DoubleComplexReport r = verify_double_complex(n, m, c.jobs);
        json columns = json::array();
        for (const ColumnExactness& col : r.columns)
            columns.push_back({{"m", col.m}, {"generators", col.generators}, {"homology", graded(col.homology, "t")}});
        o.payload = {{"n", r.n},
                     {"m", r.m},
                     {"generators_checked", r.generators_checked},
                     {"relation", to_string(r.relation)},
                     {"commuting", r.commuting},
                     {"anticommuting", r.anticommuting},
                     {"both_zero", r.both_zero},
                     {"disagreements", strings(r.disagreements)},
                     {"total_square_failures", strings(r.total_square_failures)},
                     {"grading_failures", strings(r.grading_failures)},
                     {"columns", columns},
                     {"total_homology", graded(r.total_homology, "degree")},
                     {"subcomplex_generators", r.subcomplex_generators}};
        ok = r.passed();
    } else if (what == "leibniz") {
        const LeibnizReport r = verify_leibniz(c.trials.value_or(200), c.seed, c.n.value_or(10));
        json failures = json::array();
        for (const LeibnizCase& f : r.failures)
            failures.push_back(leibniz_case(f));
        json ce = json::array();
        for (const LeibnizCase& f : r.counterexamples)
            ce.push_back(leibniz_case(f));
        o.payload = {{"trials", r.trials},
                     {"seed", r.seed},
                     {"n", r.n},
                     {"sign", "(-1)^|core lambda|"},
                     {"pairing", "canonical order"},
                     {"product_nonzero", r.per_class[0]},
                     {"size_mismatch", r.per_class[1]},
                     {"overlap_in_cores", r.per_class[2]},
                     {"opposite_sign_failures", r.shift_failures},
                     {"failures", failures},
                     {"counterexamples", ce},
                     {"counterexamples_reproduced", r.counterexamples_reproduced}};
        ok = r.passed();
    } else if (what == "assoc") {
        const AssociativityReport r = verify_associativity(c.trials.value_or(500), c.seed, c.n.value_or(9));
        o.payload = {{"trials", r.trials}, {"seed", r.seed}, {"n", r.n}, {"nonzero", r.nonzero},
                     {"violations", strings(r.violations)}};
        ok = r.passed();
    } else if (what == "signlemmas") {
        const SignLemmaReport r = sign_lemmas_exhaustive(c.n.value_or(8));
        o.payload = {{"n", c.n.value_or(8)}, {"pairs", r.pairs}, {"identities", r.identities},
                     {"failures", strings(r.failures)}};
        ok = r.passed();
    } else if (what == "cup-leibniz") {
        const CupLeibnizReport r =
            verify_cup_leibniz(need_positive(c.k, "--k"), need_positive(c.l, "--l"), c.trials.value_or(200), c.seed);
        json v = json::array();
        for (const CupLeibnizCase& f : r.violations)
            v.push_back({{"s", to_string(f.s)}, {"t", to_string(f.t)}, {"lhs", to_string(f.lhs)}, {"rhs", to_string(f.rhs)}});
        o.payload = {{"k", r.k}, {"l", r.l}, {"trials", r.trials}, {"seed", r.seed},
                     {"nonzero_products", r.nonzero_products}, {"violations", v}};
        ok = r.passed();
    } else if (what == "stabilization") {
        const int k = need_positive(c.k, "--k");
        const int l = need_positive(c.l, "--l");
        if (l > 2 * k - 1)
            throw InvalidInput("stabilization checks need l <= 2k - 1");
        const StabilizationReport r = verify_stabilization(k, l);
        o.payload = {{"k", r.k}, {"l", r.l}, {"nonzero_pairs", r.nonzero_pairs},
                     {"surviving", strings(r.surviving)}, {"generator_misses", strings(r.generator_misses)},
                     {"independence_losses", strings(r.independence_losses)}};
        ok = r.passed();
    } else if (what == "vanishing") {
        const VanishingReport r = vanishing_check(need_positive(c.k, "--k"), need_positive(c.l, "--l"), c.jobs);
        o.payload = {{"k", r.k}, {"l", r.l}, {"m", r.m}, {"in_range", r.in_range},
                     {"support", cells(r.support)}, {"violations", cells(r.violations)}};
        ok = r.passed();
    } else {
        throw InvalidInput("unknown check '" + what +
                           "' (d2, delta2, decomp, exactness, bicomplex, leibniz, assoc, signlemmas, cup-leibniz, "
                           "stabilization, vanishing)");
    }
    o.payload["check"] = what;
    o.payload["passed"] = ok;
    o.verdict = ok ? Verdict::pass : Verdict::fail;
    return o;
}

Outcome cmd_product(const Config& c)
{
    if (c.lhs.empty() || c.rhs.empty())
        throw InvalidInput("product needs --lhs and --rhs");
    Outcome o;
    if (c.op == "graded") {
        const LimitIndex a = limit_index(parse_sets(c.lhs, "family"));
        const LimitIndex b = limit_index(parse_sets(c.rhs, "family"));
        const CompatPair p = compatible(a, b);
        const LimitChain r = gproduct(a, b);
        o.payload = {{"op", "graded"},
                     {"lhs", to_string(a)},
                     {"rhs", to_string(b)},
                     {"compatible", p.compatible},
                     {"reason", to_string(p.reason)},
                     {"epsilon", p.compatible ? json(product_sign_count(a, b)) : json(nullptr)},
                     {"leibniz_class", to_string(leibniz_classify(a, b))},
                     {"pairing", "canonical order"},
                     {"result", r.is_zero() ? "0" : to_string(r)}};
    } else if (c.op == "cup") {
        const int l = need_positive(c.l, "--l");
        auto atoms = [&](const std::string& text) {
            std::vector<Atom> v;
            for (ElementSet& s : parse_sets(text, "atom set"))
                v.emplace_back(std::move(s));
            AtomSet out(l, std::move(v));
            if (c.k && !out.empty() && out.arity() != static_cast<std::size_t>(*c.k))
                throw InvalidInput("atoms do not have arity --k");
            return out;
        };
        const AtomSet s = atoms(c.lhs);
        const AtomSet t = atoms(c.rhs);
        const ChainElement r = cup(s, t);
        o.payload = {{"op", "cup"},
                     {"l", l},
                     {"lhs", to_string(s)},
                     {"rhs", to_string(t)},
                     {"lhs_degree", degree(s)},
                     {"rhs_degree", degree(t)},
                     {"result", r.is_zero() ? "0" : to_string(r)}};
    } else if (c.op == "monoid") {
        const int l = need_positive(c.l, "--l");
        const int m = need_positive(c.m, "--m");
        auto single = [](const std::string& text) {
            const std::vector<ElementSet> v = parse_sets(text, "set");
            if (v.size() > 1)
                throw InvalidInput("monoid operands are single sets");
            return v.empty() ? ElementSet{} : v.front();
        };
        const ElementSet r = monoid_product(single(c.lhs), l, single(c.rhs), m);
        o.payload = {{"op", "monoid"}, {"l", l}, {"m", m}, {"result", to_string(r)}};
    } else {
        throw InvalidInput("unknown --op '" + c.op + "'");
    }
    return o;
}

Outcome execute_impl(const Config& c, std::string* matrices)
{
    if (c.jobs < 1)
        throw InvalidInput("--jobs must be at least 1");
    if (c.command == "betti")
        return cmd_betti(c, matrices);
    if (c.command == "limit")
        return cmd_limit(c);
    if (c.command == "verify")
        return cmd_verify(c);
    if (c.command == "product")
        return cmd_product(c);
    throw InvalidInput("unknown command '" + c.command + "'");
}

// --- cache -------------------------------------------------------------------

std::optional<std::string> slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict verdict_from(const std::string& s)
{
    if (s == "pass")
        return Verdict::pass;
    if (s == "fail")
        return Verdict::fail;
    if (s == "indeterminate")
        return Verdict::indeterminate;
    throw std::runtime_error("bad verdict");
}

fs::path matrices_file(const fs::path& entry)
{
    fs::path p = entry;
    p.replace_extension(".matrices.txt");
    return p;
}

// --- rendering ---------------------------------------------------------------

std::string cell(const json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "-";
    return v.dump();
}

std::vector<std::string> column_order(const json& rows)
{
    static const std::vector<std::string> preferred = {"codegree", "degree", "dimension", "generators",
                                                       "generator_rank", "uncovered", "determinate"};
    std::vector<std::string> out;
    if (rows.empty())
        return out;
    for (const std::string& k : preferred)
        if (rows.front().contains(k))
            out.push_back(k);
    for (const auto& [k, v] : rows.front().items())
        if (std::find(out.begin(), out.end(), k) == out.end())
            out.push_back(k);
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s)
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

} // namespace

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    default:
        return "indeterminate";
    }
}

json canonical_config(const Config& c)
{
    return {{"command", c.command},
            {"check", c.check},
            {"k", opt(c.k)},
            {"l", opt(c.l)},
            {"q", opt(c.q)},
            {"stage_k", opt(c.stage_k)},
            {"n", opt(c.n)},
            {"m", opt(c.m)},
            {"max_atoms", opt(c.max_atoms)},
            {"trials", opt(c.trials)},
            {"seed", c.seed},
            {"op", c.command == "product" ? json(c.op) : json(nullptr)},
            {"lhs", c.lhs},
            {"rhs", c.rhs}};
}

Outcome execute(const Config& c)
{
    return execute_impl(c, nullptr);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

fs::path cache_file(const fs::path& dir, const json& key, int schema)
{
    return dir / (hex(fnv1a("schema=" + std::to_string(schema) + ";" + key.dump())) + ".json");
}

CacheLookup cache_load(const fs::path& dir, const Config& c)
{
    CacheLookup out;
    const json key = canonical_config(c);
    const fs::path p = cache_file(dir, key);
    const std::optional<std::string> text = slurp(p);
    if (!text)
        return out;
    auto reject = [&](const std::string& why) {
        out.warning = "ignoring cache entry " + p.string() + ": " + why;
        return out;
    };
    json e;
    try {
        e = json::parse(*text);
    } catch (const json::exception&) {
        return reject("not valid JSON");
    }
    try {
        if (e.at("schema_version").get<int>() != schema_version)
            return reject("schema version mismatch");
        if (e.at("key") != key)
            return reject("config mismatch");
        const json& payload = e.at("payload");
        if (e.at("digest").get<std::string>() != hex(fnv1a(payload.dump())))
            return reject("payload digest mismatch");
        if (!e.at("matrices_digest").is_null()) {
            const std::optional<std::string> m = slurp(matrices_file(p));
            if (!m || e.at("matrices_digest").get<std::string>() != hex(fnv1a(*m)))
                return reject("matrices file missing or modified");
        }
        out.hit = Outcome{payload, verdict_from(e.at("verdict").get<std::string>())};
    } catch (const std::exception&) {
        return reject("malformed entry");
    }
    return out;
}

namespace {

bool write_file(const fs::path& p, const std::string& data)
{
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            return false;
        f << data;
        if (!f)
            return false;
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    return !ec;
}

bool store_entry(const fs::path& dir, const Config& c, const Outcome& o, const std::string* matrices)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        return false;
    const json key = canonical_config(c);
    const fs::path p = cache_file(dir, key);
    json e = {{"schema_version", schema_version},
              {"key", key},
              {"verdict", to_string(o.verdict)},
              {"payload", o.payload},
              {"digest", hex(fnv1a(o.payload.dump()))},
              {"matrices_digest", matrices ? json(hex(fnv1a(*matrices))) : json(nullptr)}};
    if (matrices && !write_file(matrices_file(p), *matrices))
        return false;
    return write_file(p, e.dump(1) + "\n");
}

} // namespace

bool cache_store(const fs::path& dir, const Config& c, const Outcome& o)
{
    return store_entry(dir, c, o, nullptr);
}

json envelope(const Config& c, const Outcome& o, double timing_ms, const std::string& cache_state)
{
    json config = canonical_config(c);
    config["jobs"] = c.jobs;
    config["format"] = c.format;
    return {{"schema_version", schema_version},
            {"tool", "klim"},
            {"tool_version", KLIM_VERSION},
            {"command", c.command == "verify" ? "verify " + c.check : c.command},
            {"config", config},
            {"payload", o.payload},
            {"verdict", to_string(o.verdict)},
            {"timing_ms", timing_ms},
            {"cache", cache_state}};
}

std::string render_table(const Config& c, const Outcome& o)
{
    std::ostringstream out;
    out << "klim " << c.command;
    if (!c.check.empty())
        out << " " << c.check;
    out << "\n";
    for (const auto& [k, v] : o.payload.items()) {
        if (k == "rows")
            continue;
        if (v.is_array()) {
            if (v.empty() || !v.front().is_structured()) {
                std::string joined;
                for (const json& x : v)
                    joined += (joined.empty() ? "" : " ") + cell(x);
                out << "  " << k << ": " << (v.empty() ? "-" : joined) << "\n";
            } else {
                out << "  " << k << ": " << v.size() << " item(s)\n";
                for (const json& x : v)
                    out << "    " << x.dump() << "\n";
            }
        } else {
            out << "  " << k << ": " << cell(v) << "\n";
        }
    }
    if (o.payload.contains("rows") && !o.payload["rows"].empty()) {
        const json& rows = o.payload["rows"];
        const std::vector<std::string> cols = column_order(rows);
        std::vector<std::size_t> width;
        for (const std::string& col : cols) {
            std::size_t w = col.size();
            for (const json& r : rows)
                w = std::max(w, cell(r[col]).size());
            width.push_back(w);
        }
        out << "\n";
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "  " : "  ") << std::setw(static_cast<int>(width[i])) << cols[i];
        out << "\n";
        for (const json& r : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                out << "  " << std::setw(static_cast<int>(width[i])) << cell(r[cols[i]]);
            out << "\n";
        }
    }
    out << "verdict: " << to_string(o.verdict) << "\n";
    return out.str();
}

std::string render_csv(const Outcome& o)
{
    std::ostringstream out;
    if (o.payload.contains("rows")) {
        const json& rows = o.payload["rows"];
        const std::vector<std::string> cols = column_order(rows);
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << cols[i];
        out << "\n";
        for (const json& r : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                out << (i ? "," : "") << csv_field(cell(r[cols[i]]));
            out << "\n";
        }
        return out.str();
    }
    out << "key,value\n";
    for (const auto& [k, v] : o.payload.items())
        out << csv_field(k) << "," << csv_field(v.is_array() && (v.empty() || v.front().is_structured())
                                                    ? std::to_string(v.size())
                                                    : cell(v))
            << "\n";
    out << "verdict," << to_string(o.verdict) << "\n";
    return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Config c;
    CLI::App app{"Relative atomic complexes of k-equal arrangements and their limits", "klim"};
    app.set_version_flag("--version", KLIM_VERSION);
    app.require_subcommand(1);

    std::optional<int> k, l, q, stage_k, n, m;
    std::optional<std::size_t> max_atoms, trials;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--k", k, "atom size");
        sub->add_option("--l", l, "ambient dimension");
        sub->add_option("--max-atoms", max_atoms, "keep only atom sets of at most this size");
        sub->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
        sub->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"table", "csv", "json"}))
            ->capture_default_str();
        sub->add_option("--cache", c.cache_dir, "cache directory")->envname("KLIM_CACHE_DIR");
    };

    CLI::App* betti_cmd = app.add_subcommand("betti", "Betti numbers of A(k,l)");
    common(betti_cmd);

    CLI::App* limit_cmd = app.add_subcommand("limit", "homology of the limit complex at a stabilized stage");
    common(limit_cmd);
    limit_cmd->add_option("--q", q, "limit index")->required();
    limit_cmd->add_option("--stage-k", stage_k, "finite stage used")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run one verification suite");
    common(verify_cmd);
    verify_cmd->add_option("check", c.check, "d2 | delta2 | decomp | exactness | bicomplex | leibniz | assoc | "
                                             "signlemmas | cup-leibniz | stabilization | vanishing")
        ->required();
    verify_cmd->add_option("--n", n, "ground set bound");
    verify_cmd->add_option("--m", m, "family size bound (0: none)");
    verify_cmd->add_option("--trials", trials, "random trials");
    verify_cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();

    CLI::App* product_cmd = app.add_subcommand("product", "product of two generators");
    common(product_cmd);
    product_cmd->add_option("--op", c.op, "product")
        ->check(CLI::IsMember({"graded", "cup", "monoid"}))
        ->capture_default_str();
    product_cmd->add_option("--lhs", c.lhs, "left operand, e.g. [[1,2],[1,3]]")->required();
    product_cmd->add_option("--rhs", c.rhs, "right operand")->required();
    product_cmd->add_option("--m", m, "ambient of the right operand (monoid)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "klim: " << e.what() << "\n";
        return 2;
    }
    for (CLI::App* sub : {betti_cmd, limit_cmd, verify_cmd, product_cmd})
        if (sub->parsed())
            c.command = sub->get_name();
    c.k = k;
    c.l = l;
    c.q = q;
    c.stage_k = stage_k;
    c.n = n;
    c.m = m;
    c.max_atoms = max_atoms;
    c.trials = trials;
    if (c.command != "product")
        c.op = "graded";

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    std::string cache_state = "off";
    try {
        bool have = false;
        if (!c.cache_dir.empty()) {
            CacheLookup hit = cache_load(c.cache_dir, c);
            if (!hit.warning.empty())
                err << "klim: warning: " << hit.warning << "; recomputing\n";
            if (hit.hit) {
                o = std::move(*hit.hit);
                have = true;
                cache_state = "hit";
            }
        }
        if (!have) {
            std::string matrices;
            const bool want_matrices = !c.cache_dir.empty() && c.command == "betti";
            o = execute_impl(c, want_matrices ? &matrices : nullptr);
            if (!c.cache_dir.empty()) {
                cache_state = store_entry(c.cache_dir, c, o, want_matrices ? &matrices : nullptr) ? "stored" : "miss";
                if (cache_state == "miss")
                    err << "klim: warning: could not write cache entry in " << c.cache_dir << "\n";
            }
        }
    } catch (const ResourceLimit& e) {
        err << "klim: resource guard: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        err << "klim: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const VerificationFailure& e) {
        err << "klim: verification failed: " << e.what() << "\n";
        return 1;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (c.format == "json")
        out << envelope(c, o, ms, cache_state).dump(2) << "\n";
    else if (c.format == "csv")
        out << render_csv(o);
    else
        out << render_table(c, o);
    return o.verdict == Verdict::fail ? 1 : 0;
}

} // namespace klim::cli
