#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace klim::cli {

inline constexpr int schema_version = 1;

struct Config {
    std::string command; ///< betti | limit | verify | product
    std::string check;   ///< verify only
    std::optional<int> k, l, q, stage_k, n, m;
    std::optional<std::size_t> max_atoms;
    std::optional<std::size_t> trials;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string format = "table";
    std::string cache_dir;
    std::string op = "graded";
    std::string lhs, rhs;
};

enum class Verdict { pass, fail, indeterminate };
std::string to_string(Verdict v);

struct Outcome {
    nlohmann::json payload;
    Verdict verdict = Verdict::pass;
};

/// Everything that can change the payload; jobs, format and cache are left out.
nlohmann::json canonical_config(const Config& c);

/// Runs one command. Throws InvalidInput / ResourceLimit on bad input.
Outcome execute(const Config& c);

std::uint64_t fnv1a(std::string_view s);
std::filesystem::path cache_file(const std::filesystem::path& dir, const nlohmann::json& key, int schema = schema_version);

struct CacheLookup {
    std::optional<Outcome> hit;
    std::string warning; ///< set when an entry existed but was rejected
};

CacheLookup cache_load(const std::filesystem::path& dir, const Config& c);
/// Writes the entry (and a matrices file for betti). Returns false on I/O failure.
bool cache_store(const std::filesystem::path& dir, const Config& c, const Outcome& o);

nlohmann::json envelope(const Config& c, const Outcome& o, double timing_ms, const std::string& cache_state);
std::string render_table(const Config& c, const Outcome& o);
std::string render_csv(const Outcome& o);

/// Full CLI: parse, execute (through the cache), print. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace klim::cli
