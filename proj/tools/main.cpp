// fragstoch: sample the Brownian height fragmentation and run the
// built-in verification registry.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fragstoch/asymptotics.hpp"
#include "fragstoch/fragmentation.hpp"
#include "fragstoch/paths.hpp"
#include "fragstoch/registry.hpp"
#include "fragstoch/stable_pd.hpp"

namespace fs = std::filesystem;
using namespace fragstoch;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

std::string simulate_csv(const std::string& target, std::size_t n, std::uint64_t seed_v,
                         const Config& cfg) {
    const Seed seed{seed_v, 0};
    std::ostringstream csv;
    csv.precision(17);

    if (target == "excursion") {
        const std::size_t grid = cfg.get_size("simulate.grid", 1025);
        csv << "path,t,value\n";
        for (std::size_t i = 0; i < n; ++i) {
            const GridPath e = sample_normalized_excursion(grid, seed.sub(i));
            for (std::size_t k = 0; k < e.size(); ++k)
                csv << i << ',' << e.time(k) << ',' << e.values[k] << '\n';
        }
    } else if (target == "tagged-jumps") {
        const std::size_t grid = cfg.get_size("simulate.grid", 16385);
        csv << "path,rank,normalized_size\n";
        for (std::size_t i = 0; i < n; ++i) {
            const GridPath e = sample_normalized_excursion(grid, seed.sub(i).sub(0));
            Rng rng(seed.sub(i).sub(1));
            const auto tf = tagged_fragment(e, rng.uniform());
            const RankedMasses m = ranked_jumps(tf);
            for (std::size_t r = 0; r < m.masses.size(); ++r)
                csv << i << ',' << r << ',' << m.masses[r] << '\n';
        }
    } else if (target == "death-times-bridge" || target == "death-times-lamperti") {
        const StableParams p{cfg.get("stable.beta", 0.5), cfg.get("stable.C", 2.0 * std::sqrt(2.0))};
        csv << "sample,death_time\n";
        for (std::size_t i = 0; i < n; ++i) {
            const auto path = target == "death-times-bridge"
                                  ? sample_conditioned_bridge_method(1.0, p, seed.sub(i))
                                  : sample_conditioned_lamperti_method(p, seed.sub(i));
            csv << i << ',' << path.death_time << '\n';
        }
    } else if (target == "pd") {
        const PDParams pd{cfg.get("pd.beta", 0.5), cfg.get("pd.theta", 0.5)};
        const std::size_t sticks = cfg.get_size("pd.sticks", 1024);
        const std::size_t top = cfg.get_size("pd.top", 10);
        csv << "sample,rank,mass\n";
        for (std::size_t i = 0; i < n; ++i) {
            const RankedMasses m = sample_pd(pd, sticks, seed.sub(i));
            for (std::size_t r = 0; r < std::min(top, m.masses.size()); ++r)
                csv << i << ',' << r << ',' << m.masses[r] << '\n';
        }
    } else if (target == "limit-H") {
        const int terms = static_cast<int>(cfg.get_size("limit.series_terms", 2000));
        csv << "sample,H,M\n";
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng(seed.sub(i));
            const double h = sample_bes3_hitting_time(1.0, rng, terms) +
                             sample_bes3_hitting_time(1.0, rng, terms);
            const double m = sample_bes3_occupation_time(1.0, rng, terms) +
                             sample_bes3_occupation_time(1.0, rng, terms);
            csv << i << ',' << h << ',' << m << '\n';
        }
    } else if (target == "extinction-H") {
        const double t = cfg.get("extinction.t", 1e-2);
        const int window = static_cast<int>(cfg.get_size("extinction.window", 4));
        const std::vector<double> r_grid{cfg.get("extinction.r1", 0.5),
                                         cfg.get("extinction.r2", 1.0),
                                         cfg.get("extinction.r3", 2.0)};
        csv << "sample,r,H,M_leb,L_span\n";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint64_t attempt = 0;; ++attempt) {
                const auto frame =
                    extinction_frame(refined_excursion(seed.sub(i).sub(attempt)), t, r_grid,
                                     window);
                if (frame.rejected) continue;
                for (const auto& s : statistics_HML(frame.snapshots))
                    csv << i << ',' << s.r << ',' << s.H << ',' << s.M_leb << ','
                        << s.L_span << '\n';
                break;
            }
        }
    } else {
        throw CLI::ValidationError(
            "target", "unknown target '" + target +
                          "' (expected excursion, tagged-jumps, death-times-bridge, "
                          "death-times-lamperti, pd, limit-H, extinction-H)");
    }
    return csv.str();
}

int cmd_verify(const std::string& filter, std::uint64_t master_seed, std::size_t workers,
               const std::string& report_path, const Config& cfg,
               const std::string& artifact_dir) {
    const auto report =
        run_registry(builtin_registry(), filter, master_seed, workers, cfg, artifact_dir);
    for (const auto& r : report.reports) {
        std::printf("%-6s %-28s %7.1fs  %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                    r.runtime_seconds, r.result.note.c_str());
    }
    if (report.reports.empty()) {
        std::cerr << "no cases matched filter '" << filter << "'\n";
        return 2;
    }
    if (!report_path.empty()) write_text(report_path, report.to_json());
    return report.all_hard_passed() ? 0 : 1;
}

int cmd_report(const std::string& in_path, const std::string& plots_dir) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open " + in_path);
    nlohmann::json j;
    in >> j;
    if (j.value("schema", "") != "fragstoch-report/1")
        throw std::runtime_error("unrecognized report schema in " + in_path);

    fs::create_directories(plots_dir);
    std::ostringstream csv;
    csv << "case,stat,value\n";
    std::size_t passed = 0, total = 0;
    for (const auto& c : j["cases"]) {
        ++total;
        if (c.value("passed", false)) ++passed;
        for (const auto& [k, v] : c["stats"].items())
            csv << c.value("id", "") << ',' << k << ',' << v.get<double>() << '\n';
    }
    write_text((fs::path(plots_dir) / "case_stats.csv").string(), csv.str());

    std::ostringstream gp;
    gp << "# gnuplot script: p-values of every KS statistic in the report\n"
          "set datafile separator ','\n"
          "set logscale y\n"
          "set yrange [1e-6:1.5]\n"
          "set ylabel 'p-value'\n"
          "set xtics rotate by -45\n"
          "set grid ytics\n"
          "set key off\n"
          "plot '< grep \"\\\\.p,\" case_stats.csv' using 3:xtic(stringcolumn(1).'/'.stringcolumn(2)) "
          "with points pt 7, 1e-3 with lines dt 2\n";
    write_text((fs::path(plots_dir) / "p_values.gp").string(), gp.str());

    std::cout << "report " << in_path << ": " << passed << '/' << total
              << " cases passed, all_hard_passed="
              << (j.value("all_hard_passed", false) ? "true" : "false") << '\n'
              << "wrote " << plots_dir << "/case_stats.csv and p_values.gp\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brownian height fragmentation: samplers and verification harness"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value file overriding every default");

    // simulate
    std::string target, out_path;
    std::size_t n = 100;
    std::uint64_t seed_v = 1;
    auto* sim = app.add_subcommand("simulate", "draw samples and emit CSV");
    sim->add_option("target", target, "what to sample")->required();
    sim->add_option("--n", n, "number of samples/paths");
    sim->add_option("--seed", seed_v, "master seed");
    sim->add_option("--out", out_path, "output CSV path (default: stdout)");

    // verify
    std::string filter, report_path, artifact_dir;
    std::size_t workers = std::thread::hardware_concurrency();
    std::uint64_t verify_seed = 20260823;
    auto* ver = app.add_subcommand("verify", "run the built-in verification registry");
    ver->add_option("--filter", filter, "substring match on case id or suite");
    ver->add_option("--seed", verify_seed, "master seed");
    ver->add_option("--workers", workers, "worker threads (results are independent of this)");
    ver->add_option("--report", report_path, "write the JSON report here");
    ver->add_option("--artifacts", artifact_dir, "directory for per-case artifacts");

    // report
    std::string in_path, plots_dir = "plots";
    auto* rep = app.add_subcommand("report", "summarize a JSON report and emit plot scripts");
    rep->add_option("--in", in_path, "report JSON produced by verify")->required();
    rep->add_option("--plots", plots_dir, "output directory for CSV + plot scripts");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) cfg = Config::from_file(config_path);
        if (sim->parsed()) {
            write_text(out_path, simulate_csv(target, n, seed_v, cfg));
            return 0;
        }
        if (ver->parsed())
            return cmd_verify(filter, verify_seed, workers, report_path, cfg, artifact_dir);
        if (rep->parsed()) return cmd_report(in_path, plots_dir);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
