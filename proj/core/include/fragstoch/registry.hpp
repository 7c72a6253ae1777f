#ifndef FRAGSTOCH_REGISTRY_HPP
#define FRAGSTOCH_REGISTRY_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fragstoch/rng.hpp"

namespace fragstoch {

/// Key=value overrides for every tunable default (replicate counts, grid
/// sizes, tolerances). Unknown keys are ignored by readers.
struct Config {
    std::map<std::string, std::string> kv;

    [[nodiscard]] double get(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t get_size(const std::string& key, std::size_t fallback) const;

    /// Parses lines of the form `key = value`; '#' starts a comment.
    static Config from_file(const std::string& path);
    static Config from_lines(const std::string& text);
};

struct CaseContext {
    Seed seed;
    std::size_t workers = 1;
    const Config* config = nullptr;
    std::string artifact_dir; // empty: no artifact emission

    [[nodiscard]] double cfg(const std::string& key, double fallback) const {
        return config ? config->get(key, fallback) : fallback;
    }
    [[nodiscard]] std::size_t cfg_size(const std::string& key, std::size_t fallback) const {
        return config ? config->get_size(key, fallback) : fallback;
    }
};

struct CaseResult {
    bool passed = false;
    std::vector<std::pair<std::string, double>> stats; // auditable numbers
    std::string note;
};

struct VerificationCase {
    std::string id;
    std::string suite;
    std::string description;
    bool hard = true; // hard cases gate the exit code; diagnostics do not
    std::function<CaseResult(const CaseContext&)> run;
};

struct StatReport {
    std::string id;
    std::string suite;
    bool hard = true;
    bool passed = false;
    double runtime_seconds = 0.0;
    CaseResult result;
};

struct RegistryReport {
    std::uint64_t master_seed = 0;
    std::vector<StatReport> reports;

    [[nodiscard]] bool all_hard_passed() const noexcept;
    /// Versioned JSON; identical across reruns with the same master seed
    /// except for the runtime fields.
    [[nodiscard]] std::string to_json() const;
};

/// The full built-in suite: one case per verified statement plus the
/// harness self-calibration cases.
std::vector<VerificationCase> builtin_registry();

/// Run every case whose id or suite contains `filter` (empty = all).
/// Numeric failures inside a case become failed reports, not crashes.
RegistryReport run_registry(const std::vector<VerificationCase>& cases,
                            const std::string& filter, std::uint64_t master_seed,
                            std::size_t workers, const Config& config,
                            const std::string& artifact_dir = {});

/// Deterministic parallel map: f(seed.sub(i), i) for i in [0, n), fanned
/// out over `workers` threads in fixed blocks. The result is a pure
/// function of (n, seed) — worker count only affects scheduling.
template <typename F>
std::vector<double> parallel_map(std::size_t n, Seed seed, std::size_t workers, F&& f) {
    std::vector<double> out(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(seed.sub(i), i);
        return out;
    }
    constexpr std::size_t block = 256;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        try {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                const std::size_t lo = b * block;
                if (lo >= n || failed.load(std::memory_order_relaxed)) return;
                const std::size_t hi = std::min(n, lo + block);
                for (std::size_t i = lo; i < hi; ++i) out[i] = f(seed.sub(i), i);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace fragstoch

#endif
