#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

// fresh per test-binary invocation; removed up front so stale files cannot mask a failure
const fs::path& scratch() {
    static const fs::path root = [] {
        const fs::path p = fs::temp_directory_path() / "gbmlab_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path log = scratch() / ("cmd" + std::to_string(counter++) + ".log");
    std::string cmd;
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += std::string(GBMLAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CmdResult res;
    if (raw != -1 && WIFEXITED(raw)) res.exit_code = WEXITSTATUS(raw);
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    res.output = buf.str();
    return res;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const char* kSdeConfig =
    "[experiment]\n"
    "kind = sde\n"
    "seed = 7\n"
    "\n"
    "[grid]\n"
    "horizon = 1.0\n"
    "n_steps = 64\n"
    "\n"
    "[uncertainty]\n"
    "sigma2_min = 0.5\n"
    "sigma2_max = 1.0\n"
    "\n"
    "[sde]\n"
    "drift = linear_drift(-1)\n"
    "sigma = lipschitz_sigma(0.5,1)\n"
    "x0 = 1.0\n";

}  // namespace

TEST_CASE("version and catalog print to stdout and exit cleanly") {
    const CmdResult version = run_cli("--version");
    CHECK(version.exit_code == 0);
    CHECK(version.output.find("gbmlab 1.0.0") != std::string::npos);

    const CmdResult catalog = run_cli("catalog");
    CHECK(catalog.exit_code == 0);
    CHECK(catalog.output.find("square") != std::string::npos);
    CHECK(catalog.output.find("rlogr") != std::string::npos);
    CHECK(catalog.output.find("linear_drift") != std::string::npos);
}

TEST_CASE("heat run writes the result table with the expected center value") {
    const fs::path cfg = write_config("gheat.cfg",
                                      "[experiment]\n"
                                      "kind = gheat\n"
                                      "seed = 1\n"
                                      "\n"
                                      "[grid]\n"
                                      "horizon = 1.0\n"
                                      "\n"
                                      "[uncertainty]\n"
                                      "sigma2_min = 0.5\n"
                                      "sigma2_max = 1.0\n"
                                      "\n"
                                      "[gheat]\n"
                                      "payoff = square\n"
                                      "n_x = 201\n");
    const fs::path out = scratch() / "gheat_out";
    const CmdResult res = run_cli("run " + cfg.string() + " --out " + out.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("result.csv") != std::string::npos);
    CHECK(fs::exists(out / "result.csv"));
    CHECK(fs::exists(out / "plot.svg"));
    CHECK(fs::exists(out / "manifest.txt"));

    // x^2 payoff with variance band [0.5, 1]: the center value is the top of the band
    const auto rows = read_csv_rows(out / "result.csv");
    REQUIRE(!rows.empty());
    double center_u = 0.0;
    double best = 1e300;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        if (std::fabs(row[0]) < best) {
            best = std::fabs(row[0]);
            center_u = row[1];
        }
    }
    CHECK(best < 1e-9);
    CHECK(center_u == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("envelope run reproduces the exponential bound") {
    const fs::path cfg = write_config("bihari.cfg",
                                      "[experiment]\n"
                                      "kind = bihari\n"
                                      "seed = 1\n"
                                      "\n"
                                      "[bihari]\n"
                                      "rho = linear(1)\n"
                                      "a = 1.0\n"
                                      "beta = 1.0\n"
                                      "horizon = 1.0\n"
                                      "n_points = 65\n");
    const fs::path out = scratch() / "bihari_out";
    const CmdResult res = run_cli("run " + cfg.string() + " --out " + out.string());
    CHECK(res.exit_code == 0);

    const auto rows = read_csv_rows(out / "result.csv");
    REQUIRE(rows.size() == 65);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        CHECK(row[2] == 0.0);
    }
    CHECK(rows.front()[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(rows.back()[1] - std::exp(1.0)) < 1e-6);
}

TEST_CASE("identical config and seed give byte-identical results") {
    const fs::path cfg = write_config("sde.cfg", kSdeConfig);
    const fs::path out_a = scratch() / "sde_a";
    const fs::path out_b = scratch() / "sde_b";
    const fs::path out_c = scratch() / "sde_c";

    CHECK(run_cli("run " + cfg.string() + " --out " + out_a.string()).exit_code == 0);
    CHECK(run_cli("run " + cfg.string() + " --out " + out_b.string()).exit_code == 0);
    CHECK(read_bytes(out_a / "result.csv") == read_bytes(out_b / "result.csv"));

    CHECK(run_cli("run " + cfg.string() + " --seed 8 --out " + out_c.string()).exit_code == 0);
    CHECK(read_bytes(out_a / "result.csv") != read_bytes(out_c / "result.csv"));
}

TEST_CASE("the manifest is a runnable config that reproduces the run") {
    const fs::path cfg = write_config("sde_manifest.cfg", kSdeConfig);
    const fs::path out_a = scratch() / "manifest_a";
    const fs::path out_b = scratch() / "manifest_b";

    CHECK(run_cli("run " + cfg.string() + " --seed 21 --out " + out_a.string()).exit_code == 0);
    const fs::path manifest = out_a / "manifest.txt";
    REQUIRE(fs::exists(manifest));
    CHECK(read_bytes(manifest).find("seed = 21") != std::string::npos);

    CHECK(run_cli("run " + manifest.string() + " --out " + out_b.string()).exit_code == 0);
    CHECK(read_bytes(out_a / "result.csv") == read_bytes(out_b / "result.csv"));
}

TEST_CASE("output directory precedence is flag, then environment, then config") {
    const fs::path cfg_dir = scratch() / "prec_cfg";
    const fs::path env_dir = scratch() / "prec_env";
    const fs::path flag_dir = scratch() / "prec_flag";
    const fs::path cfg = write_config("sde_prec.cfg",
                                      std::string(kSdeConfig) + "\n[experiment]\nout = " +
                                          cfg_dir.string() + "\n");

    CHECK(run_cli("run " + cfg.string()).exit_code == 0);
    CHECK(fs::exists(cfg_dir / "result.csv"));

    CHECK(run_cli("run " + cfg.string(), "GBMLAB_OUT=" + env_dir.string()).exit_code == 0);
    CHECK(fs::exists(env_dir / "result.csv"));

    CHECK(run_cli("run " + cfg.string() + " --out " + flag_dir.string(),
                  "GBMLAB_OUT=" + scratch().string() + "/prec_ignored")
              .exit_code == 0);
    CHECK(fs::exists(flag_dir / "result.csv"));
    CHECK(!fs::exists(scratch() / "prec_ignored"));
}

TEST_CASE("configuration mistakes exit with code 2 and name the problem") {
    const CmdResult missing = run_cli("run " + (scratch() / "absent.cfg").string());
    CHECK(missing.exit_code == 2);
    CHECK(missing.output.find("validation error") != std::string::npos);
    CHECK(missing.output.find("cannot read config file") != std::string::npos);

    const fs::path unknown_key = write_config("unknown_key.cfg",
                                              "[experiment]\n"
                                              "kind = gheat\n"
                                              "\n"
                                              "[grid]\n"
                                              "horizon = 1.0\n"
                                              "\n"
                                              "[uncertainty]\n"
                                              "sigma2_min = 0.5\n"
                                              "sigma2_max = 1.0\n"
                                              "\n"
                                              "[gheat]\n"
                                              "payoff = square\n"
                                              "n_xx = 3\n");
    const fs::path out = scratch() / "unknown_key_out";
    const CmdResult bad_key = run_cli("run " + unknown_key.string() + " --out " + out.string());
    CHECK(bad_key.exit_code == 2);
    CHECK(bad_key.output.find("gheat.n_xx") != std::string::npos);
    CHECK(!fs::exists(out / "result.csv"));

    const fs::path bad_kind = write_config("bad_kind.cfg",
                                           "[experiment]\n"
                                           "kind = warp\n");
    const CmdResult kind_res = run_cli("run " + bad_kind.string());
    CHECK(kind_res.exit_code == 2);
    CHECK(kind_res.output.find("unknown experiment kind 'warp'") != std::string::npos);

    const CmdResult bad_sub = run_cli("warp");
    CHECK(bad_sub.exit_code == 2);

    const CmdResult bad_suite = run_cli("verify warp");
    CHECK(bad_suite.exit_code == 2);
    CHECK(bad_suite.output.find("unknown verify suite 'warp'") != std::string::npos);
}

TEST_CASE("solver failures exit with code 3") {
    const fs::path cfg = write_config("abort.cfg",
                                      "[experiment]\n"
                                      "kind = bsde\n"
                                      "seed = 1\n"
                                      "\n"
                                      "[grid]\n"
                                      "horizon = 1.0\n"
                                      "n_steps = 32\n"
                                      "\n"
                                      "[uncertainty]\n"
                                      "sigma2_min = 0.5\n"
                                      "sigma2_max = 1.0\n"
                                      "\n"
                                      "[bsde]\n"
                                      "xi = square\n"
                                      "f = linear(0.5)\n"
                                      "n_iter = 2\n"
                                      "tolerance = 1e-12\n");
    const CmdResult res = run_cli("run " + cfg.string() + " --out " + (scratch() / "abort_out").string());
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("numerical abort") != std::string::npos);
    CHECK(res.output.find("did not converge") != std::string::npos);
}

TEST_CASE("verify axioms reports one pass line for the axiom criterion") {
    const CmdResult res = run_cli("verify axioms");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("criterion 01 PASS") != std::string::npos);
    CHECK(res.output.find("FAIL") == std::string::npos);
}
