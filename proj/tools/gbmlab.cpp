#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbmlab/common.hpp"
#include "gbmlab/config.hpp"
#include "gbmlab/experiments.hpp"
#include "gbmlab/parallel.hpp"
#include "gbmlab/verify.hpp"

namespace {

int run_verify(const std::string& suite) {
    std::vector<int> failing;
    for (const int id : gbmlab::suite_criteria(suite)) {
        const gbmlab::CriterionResult res = gbmlab::run_criterion(id);
        std::printf("criterion %02d %s (%6.2fs) %s\n", res.id, res.passed ? "PASS" : "FAIL",
                    res.seconds, res.name.c_str());
        for (const auto& line : res.details) std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
        if (!res.passed) failing.push_back(res.id);
    }
    if (failing.empty()) return 0;
    std::string rows;
    for (const int id : failing) rows += (rows.empty() ? "" : ", ") + std::to_string(id);
    std::printf("FAILED criteria: %s\n", rows.c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gbmlab: G-expectation and G-SDE experiments"};
    app.set_version_flag("--version", std::string(gbmlab::kVersion));
    app.require_subcommand(1);

    std::string cfg_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    CLI::App* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", cfg_path, "config file (key = value with [sections])")
        ->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override [experiment] seed");
    run->add_option("--out", out_dir, "output directory (else $GBMLAB_OUT, else config)");
    run->add_option("--threads", threads, "worker threads (default: hardware)");

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("suite", suite, "axioms | oracles | envelopes | all")->required();
    verify->add_option("--threads", threads, "worker threads (default: hardware)");

    CLI::App* catalog = app.add_subcommand("catalog", "list payoff/coefficient/modulus entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help and --version exit 0, usage errors are config errors
    }

    try {
        if (threads > 0) gbmlab::set_thread_count(threads);
        if (run->parsed()) {
            gbmlab::RunOptions opts;
            if (seed_opt->count() > 0) opts.seed = seed;
            if (!out_dir.empty()) {
                opts.out_dir = out_dir;
            } else if (const char* env = std::getenv("GBMLAB_OUT")) {
                if (env[0] != '\0') opts.out_dir = std::string(env);
            }
            const gbmlab::Config cfg = gbmlab::Config::parse_file(cfg_path);
            const gbmlab::RunResult result = gbmlab::run_experiment(cfg, opts);
            for (const auto& file : result.files)
                std::printf("%s/%s\n", result.out_dir.c_str(), file.c_str());
            return 0;
        }
        if (verify->parsed()) return run_verify(suite);
        if (catalog->parsed()) {
            std::fputs(gbmlab::catalog_text().c_str(), stdout);
            return 0;
        }
    } catch (const gbmlab::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    }
    return 0;
}
