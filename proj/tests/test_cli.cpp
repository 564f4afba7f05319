#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* b = std::getenv("CHRONOSIM_BIN");
    REQUIRE(b != nullptr);
    return b;
}

int run_cmd(const std::string& args, const fs::path& log) {
    const std::string cmd =
        bin() + " " + args + " >" + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    const fs::path p = fs::temp_directory_path() / "chronosim_cli";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const char* kScenario = R"(
horizon_s = 120
beacon_interval_s = 0.1
n_measurements = 100
seed = 1

[node head]
ratio = 1.0
offset_s = 0.0
[node gateway]
ratio = 1.0001
offset_s = 1.0
[node sensor]
ratio = 1.0002
offset_s = 0.9

[link head gateway]
distance_m = 100
[link gateway sensor]
distance_m = 200
)";

}  // namespace

TEST_CASE("cli end to end") {
    const fs::path dir = work_dir();
    const fs::path cfg = dir / "ref.cfg";
    std::ofstream(cfg) << kScenario;
    const fs::path log = dir / "log.txt";

    SECTION("run writes trace and series and exits 0") {
        const int rc = run_cmd("run " + cfg.string() + " --out " +
                                   (dir / "out").string(),
                               log);
        CHECK(rc == 0);
        CHECK(fs::exists(dir / "out" / "trace.csv"));
        CHECK(fs::exists(dir / "out" / "series.csv"));
        const std::string text = slurp(log);
        CHECK(text.find("delivered=") != std::string::npos);
    }

    SECTION("--set n_measurements=0 leaves a header-only trace") {
        const int rc = run_cmd("run " + cfg.string() + " --out " +
                                   (dir / "empty").string() +
                                   " --set n_measurements=0",
                               log);
        CHECK(rc == 0);
        const std::string trace = slurp(dir / "empty" / "trace.csv");
        CHECK(std::count(trace.begin(), trace.end(), '\n') == 1);
    }

    SECTION("missing config fails with the path in the message") {
        const int rc = run_cmd("run " + (dir / "nope.cfg").string() +
                                   " --out " + (dir / "x").string(),
                               log);
        CHECK(rc != 0);
        CHECK(slurp(log).find("nope.cfg") != std::string::npos);
    }

    SECTION("bad config lists the violations and fails") {
        const fs::path bad = dir / "bad.cfg";
        std::ofstream(bad) << "horizon_s = -5\nwhatever = 1\n";
        const int rc = run_cmd("run " + bad.string() + " --out " +
                                   (dir / "y").string(),
                               log);
        CHECK(rc != 0);
        CHECK(slurp(log).find("whatever") != std::string::npos);
    }

    SECTION("identical runs produce byte-identical CSV files") {
        REQUIRE(run_cmd("run " + cfg.string() + " --out " +
                            (dir / "a").string(),
                        log) == 0);
        REQUIRE(run_cmd("run " + cfg.string() + " --out " +
                            (dir / "b").string(),
                        log) == 0);
        CHECK(slurp(dir / "a" / "trace.csv") ==
              slurp(dir / "b" / "trace.csv"));
        CHECK(slurp(dir / "a" / "series.csv") ==
              slurp(dir / "b" / "series.csv"));
    }

    SECTION("CHRONOSIM_SEED overrides the config seed") {
        REQUIRE(run_cmd("run " + cfg.string() + " --out " +
                            (dir / "s1").string(),
                        log) == 0);
        const std::string cmd = "CHRONOSIM_SEED=42 " + bin() + " run " +
                                cfg.string() + " --out " +
                                (dir / "s2").string() + " >/dev/null 2>&1";
        REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        CHECK(slurp(dir / "s1" / "trace.csv") !=
              slurp(dir / "s2" / "trace.csv"));
    }

    SECTION("sweep writes one subdirectory per value plus a summary") {
        const int rc = run_cmd("sweep " + cfg.string() +
                                   " --param beacon_interval_s "
                                   "--values 0.05,0.1 --out " +
                                   (dir / "sw").string(),
                               log);
        CHECK(rc == 0);
        CHECK(fs::exists(dir / "sw" / "bi_0.05" / "trace.csv"));
        CHECK(fs::exists(dir / "sw" / "bi_0.1" / "trace.csv"));
        CHECK(fs::exists(dir / "sw" / "sweep.csv"));
    }

    SECTION("sweep with no values is a usage error") {
        const int rc = run_cmd("sweep " + cfg.string() +
                                   " --values '' --out " +
                                   (dir / "sw0").string(),
                               log);
        CHECK(rc != 0);
    }

    SECTION("compare emits both MSEs and their ratio") {
        const int rc = run_cmd("compare " + cfg.string() + " --out " +
                                   (dir / "cmp").string(),
                               log);
        CHECK(rc == 0);
        const std::string text = slurp(log);
        CHECK(text.find("mse_two_hop=") != std::string::npos);
        CHECK(text.find("mse_single_hop=") != std::string::npos);
        CHECK(text.find("ratio=") != std::string::npos);
        CHECK(fs::exists(dir / "cmp" / "compare.csv"));
    }

    SECTION("compare on a single-hop config is a usage error") {
        const fs::path single = dir / "single.cfg";
        std::ofstream(single) << R"(
horizon_s = 120
[node head]
[node sensor]
ratio = 1.0002
offset_s = 0.9
[link head sensor]
distance_m = 300
)";
        const int rc = run_cmd("compare " + single.string() + " --out " +
                                   (dir / "cmp1").string(),
                               log);
        CHECK(rc != 0);
    }
}
