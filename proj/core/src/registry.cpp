#include "fragstoch/registry.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fragstoch {

namespace {

// FNV-1a; stable across platforms, unlike std::hash
std::uint64_t stable_hash(const std::string& s) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

double Config::get(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + it->second);
    }
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
    const double v = get(key, static_cast<double>(fallback));
    if (v < 0.0) throw std::invalid_argument("config: key '" + key + "' must be nonnegative");
    return static_cast<std::size_t>(v);
}

Config Config::from_lines(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value at line " +
                                        std::to_string(lineno));
        cfg.kv[key] = value;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_lines(buf.str());
}

bool RegistryReport::all_hard_passed() const noexcept {
    for (const auto& r : reports)
        if (r.hard && !r.passed) return false;
    return true;
}

std::string RegistryReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "fragstoch-report/1";
    j["master_seed"] = master_seed;
    j["all_hard_passed"] = all_hard_passed();
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json c;
        c["id"] = r.id;
        c["suite"] = r.suite;
        c["hard"] = r.hard;
        c["passed"] = r.passed;
        c["runtime_seconds"] = r.runtime_seconds;
        c["note"] = r.result.note;
        nlohmann::json stats = nlohmann::json::object();
        for (const auto& [k, v] : r.result.stats) stats[k] = v;
        c["stats"] = std::move(stats);
        arr.push_back(std::move(c));
    }
    j["cases"] = std::move(arr);
    return j.dump(2);
}

RegistryReport run_registry(const std::vector<VerificationCase>& cases,
                            const std::string& filter, std::uint64_t master_seed,
                            std::size_t workers, const Config& config,
                            const std::string& artifact_dir) {
    RegistryReport report;
    report.master_seed = master_seed;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& vc = cases[k];
        if (!filter.empty() && vc.id.find(filter) == std::string::npos &&
            vc.suite.find(filter) == std::string::npos)
            continue;
        StatReport sr;
        sr.id = vc.id;
        sr.suite = vc.suite;
        sr.hard = vc.hard;
        CaseContext ctx;
        // the case seed depends on the id, not the position, so reordering
        // or filtering the registry does not change any case's draws
        ctx.seed = Seed{master_seed, stable_hash(vc.id)};
        ctx.workers = workers == 0 ? 1 : workers;
        ctx.config = &config;
        ctx.artifact_dir = artifact_dir;
        const auto start = std::chrono::steady_clock::now();
        try {
            sr.result = vc.run(ctx);
            sr.passed = sr.result.passed;
        } catch (const std::exception& ex) {
            sr.passed = false;
            sr.result.passed = false;
            sr.result.note = std::string("exception: ") + ex.what();
        }
        sr.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.reports.push_back(std::move(sr));
    }
    return report;
}

} // namespace fragstoch
