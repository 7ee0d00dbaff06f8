#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssa/cli.hpp"
#include "ssa/serialize.hpp"

namespace fs = std::filesystem;
using namespace ssa;

namespace {

struct Out {
    int code;
    std::string out;
    std::string err;
};

Out run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ssa_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("simulate writes a reproducible scenario") {
    const auto d = scratch("sim");
    auto r = run({"simulate", "--setting", "4", "--T", "1000", "--seed", "1", "--out", (d / "a").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "a" / "observed.csv"));
    CHECK(fs::exists(d / "a" / "manifest.json"));
    run({"simulate", "--setting", "4", "--T", "1000", "--seed", "1", "--out", (d / "b").string()});
    CHECK(slurp(d / "a" / "observed.csv") == slurp(d / "b" / "observed.csv"));
    CHECK(slurp(d / "a" / "manifest.json") == slurp(d / "b" / "manifest.json"));

    const auto m = Json::parse(slurp(d / "a" / "manifest.json"));
    CHECK(m["setting"] == 4);
    CHECK(m["T"] == 1000);

    const auto series = read_csv((d / "a" / "observed.csv").string());
    CHECK(series.length() == 1000);
    CHECK(series.dim() == 8);

    CHECK(run({"simulate", "--setting", "5", "--T", "1000", "--out", (d / "c").string()}).code == 1);
    CHECK(run({"simulate", "--setting", "1", "--T", "100", "--out", (d / "c").string()}).code == 2);
}

TEST_CASE("ssa comb writes result, components and the pseudo-eigenvalue table") {
    const auto d = scratch("ssa");
    REQUIRE(run({"simulate", "--setting", "4", "--T", "4000", "--seed", "1", "--out", d.string()}).code == 0);
    const auto in = (d / "observed.csv").string();
    const auto r = run({"ssa", "--in", in, "--method", "comb", "--K", "6", "--lags", "1", "--k", "3", "--out",
                        (d / "comb").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "comb" / "result.json"));
    CHECK(fs::exists(d / "comb" / "components.csv"));
    const auto table = slurp(d / "comb" / "pseudo_eigenvalues.csv");
    CHECK(table.rfind(",d1,d2,d3,d4,d5,d6,d7,d8\nM_m,", 0) == 0);
    CHECK(table.find("\nM_v,") != std::string::npos);
    CHECK(table.find("\nM_tau1,") != std::string::npos);
    CHECK(table.find("\nsum,") != std::string::npos);

    const auto j = Json::parse(slurp(d / "comb" / "result.json"));
    CHECK(j["method"] == "comb");
    CHECK(j["k"] == 3);
    REQUIRE(j.contains("classification"));
    CHECK(j["classification"]["components"].size() == 3);

    const auto comps = read_csv((d / "comb" / "components.csv").string());
    CHECK(comps.names().front() == "N1");
    CHECK(comps.dim() == 8);

    SECTION("screeplot reads the result back") {
        const auto s = run({"screeplot", "--result", (d / "comb" / "result.json").string(), "--out",
                            (d / "scree.csv").string(), "--svg", (d / "scree.svg").string()});
        REQUIRE(s.code == 0);
        const auto csv = slurp(d / "scree.csv");
        CHECK(csv.rfind("component,value\n1,", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
        CHECK(slurp(d / "scree.svg").find("<svg") != std::string::npos);
    }

    SECTION("single-matrix methods") {
        for (const char* m : {"sir", "save", "cor", "assa"}) {
            const auto s = run({"ssa", "--in", in, "--method", m, "--K", "6", "--k", "3", "--out", (d / m).string()});
            CHECK(s.code == 0);
            CHECK(fs::exists(d / m / "result.json"));
            CHECK_FALSE(fs::exists(d / m / "pseudo_eigenvalues.csv"));
        }
    }

    SECTION("sir with too few intervals warns") {
        const auto s = run({"ssa", "--in", in, "--method", "sir", "--K", "2", "--k", "3", "--out", (d / "w").string()});
        CHECK(s.code == 0);
        CHECK(s.err.find("warning:") != std::string::npos);
    }

    SECTION("usage errors") {
        CHECK(run({"ssa", "--in", in, "--method", "cor", "--K", "6", "--lags", "1,2,3", "--k", "3", "--out",
                   (d / "x").string()})
                  .code == 1);
        CHECK(run({"ssa", "--in", in, "--method", "ica", "--K", "6", "--k", "3"}).code == 1);
        CHECK(run({"ssa", "--in", in, "--method", "comb", "--K", "6", "--breakpoints", "100", "--k", "3"}).code == 1);
        CHECK(run({"ssa", "--in", in, "--method", "comb", "--K", "6", "--k", "8"}).code == 1);
        CHECK(run({"ssa", "--in", in, "--method", "comb", "--k", "3"}).code == 1);
        CHECK(run({"ssa", "--in", in, "--method", "comb", "--K", "6", "--k", "3", "--centering", "median"}).code == 1);
        CHECK(run({"frobnicate"}).code == 1);
    }

    SECTION("breakpoints and verbose trace") {
        const auto s = run({"ssa", "--in", in, "--method", "comb", "--breakpoints", "1001,2001,3001", "--k", "3",
                            "--verbose", "--out", (d / "bp").string()});
        CHECK(s.code == 0);
        CHECK(s.err.find("objective by sweep") != std::string::npos);
    }
}

TEST_CASE("data errors exit 2 and can be reported as JSON") {
    const auto d = scratch("err");
    std::ofstream(d / "bad.csv") << "1,2\n3,x\n";
    const auto r = run({"--json", "ssa", "--in", (d / "bad.csv").string(), "--method", "sir", "--K", "2", "--k", "1"});
    CHECK(r.code == 2);
    const auto j = Json::parse(r.err);
    CHECK(j["error"] == "parse-error");
    CHECK(j["message"].get<std::string>().find('2') != std::string::npos);

    const auto plain = run({"ssa", "--in", (d / "missing.csv").string(), "--method", "sir", "--K", "2", "--k", "1"});
    CHECK(plain.code == 2);
    CHECK(plain.err.rfind("error: ", 0) == 0);

    std::ofstream(d / "ok.csv") << "1,2\n2,4\n3,6\n4,8\n5,10\n6,12\n";
    CHECK(run({"ssa", "--in", (d / "ok.csv").string(), "--method", "sir", "--K", "2", "--k", "1"}).code == 2);

    const auto u = run({"--json", "simulate", "--setting", "9", "--T", "1000", "--out", d.string()});
    CHECK(u.code == 1);
    CHECK(Json::parse(u.err)["error"] == "usage-error");
}

TEST_CASE("diagnose") {
    const auto d = scratch("diag");
    REQUIRE(run({"simulate", "--setting", "1", "--T", "1200", "--out", d.string()}).code == 0);
    const auto r = run({"diagnose", "--in", (d / "observed.csv").string(), "--K", "4", "--lag", "2", "--out",
                        (d / "diag.csv").string(), "--svg", (d / "diag.svg").string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(d / "diag.csv");
    // header plus one row per (interval, channel)
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 8);
    CHECK(fs::exists(d / "diag.svg"));
}

TEST_CASE("evaluate with one replicate") {
    const auto d = scratch("eval");
    const auto r = run({"evaluate", "--settings", "1", "--methods", "sir,comb", "--T", "1000", "--K", "6",
                        "--replicates", "1", "--out", d.string()});
    REQUIRE(r.code == 0);
    const auto results = slurp(d / "results.csv");
    CHECK(std::count(results.begin(), results.end(), '\n') == 3);
    const auto agg = slurp(d / "aggregate.csv");
    CHECK(std::count(agg.begin(), agg.end(), '\n') == 3);
    CHECK(run({"evaluate", "--methods", "ica", "--out", d.string()}).code == 1);
}

TEST_CASE("config file supplies defaults that flags override") {
    const auto d = scratch("cfg");
    std::ofstream(d / "sim.ini") << "setting=2\nT=800\nseed=5\nout=" << (d / "from_cfg").string() << "\n";
    REQUIRE(run({"simulate", "--config", (d / "sim.ini").string()}).code == 0);
    auto m = Json::parse(slurp(d / "from_cfg" / "manifest.json"));
    CHECK(m["setting"] == 2);
    CHECK(m["T"] == 800);
    CHECK(m["seed"] == 5);

    REQUIRE(run({"simulate", "--config", (d / "sim.ini").string(), "--T", "900"}).code == 0);
    m = Json::parse(slurp(d / "from_cfg" / "manifest.json"));
    CHECK(m["T"] == 900);
}

TEST_CASE("the installed binary follows the exit-code contract") {
    const auto d = scratch("bin");
    const std::string bin = SSA_CLI_PATH;
    CHECK(std::system((bin + " --help > " + (d / "h.txt").string()).c_str()) == 0);
    const int bad = std::system((bin + " simulate --setting 5 --T 1000 --out " + d.string() + " 2> /dev/null").c_str());
    REQUIRE(WIFEXITED(bad));
    CHECK(WEXITSTATUS(bad) == 1);
}
