#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "ferrohopf/cli.hpp"

namespace fs = std::filesystem;
using namespace ferrohopf::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "ferrohopf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ferrohopf_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("dispersion writes a CSV with provenance header")
{
    const Result r = call({"dispersion", "--law", "constant:mu=3", "--beta0", "0.5", "--alpha0", "0.1", "--count", "5"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.rfind("# ferrohopf 1.0.0\n# config_hash=", 0) == 0);
    CHECK(r.out.find("\nq,D\n") != std::string::npos);
    CHECK(r.out.find("\"pair_count\": 2") != std::string::npos);
}

TEST_CASE("runs are deterministic and the hash tracks the config")
{
    const std::vector<std::string> a{"coeffs", "--law", "constant:mu=4", "--regime", "finite", "--q", "3"};
    const Result r1 = call(a), r2 = call(a);
    REQUIRE(r1.code == exit_ok);
    CHECK(r1.out == r2.out);
    const Result r3 = call({"coeffs", "--law", "constant:mu=4", "--regime", "finite", "--q", "3.5"});
    REQUIRE(r3.code == exit_ok);
    RunConfig c1, c2;
    c1.subcommand = c2.subcommand = "coeffs";
    c1.law = c2.law = "constant:mu=4";
    c1.q = 3.0;
    c2.q = 3.5;
    CHECK(config_hash(c1) != config_hash(c2));
    CHECK(config_hash(c1).size() == 16);
    c2.q = 3.0;
    c2.out = "/elsewhere.csv";
    CHECK(config_hash(c1) == config_hash(c2));
}

TEST_CASE("law specifications in all three forms are equivalent")
{
    const fs::path d = scratch("law");
    { std::ofstream(d / "law.json") << R"({"kind":"langevin","saturation":10,"gamma":0.3})"; }
    const Result a = call({"coeffs", "--law", "langevin:saturation=10,gamma=0.3"});
    const Result b = call({"coeffs", "--law", R"({"kind":"langevin","saturation":10,"gamma":0.3})"});
    const Result c = call({"coeffs", "--law", "@" + (d / "law.json").string()});
    REQUIRE(a.code == exit_ok);
    REQUIRE(b.code == exit_ok);
    REQUIRE(c.code == exit_ok);
    auto c3 = [](const std::string& s) { return s.substr(s.find("\"c3\""), 40); };
    CHECK(c3(a.out) == c3(b.out));
    CHECK(c3(a.out) == c3(c.out));
}

TEST_CASE("bad configuration exits with code 2")
{
    CHECK(call({"dispersion", "--law", "constant:mu=0.5", "--beta0", "1", "--alpha0", "1"}).code == exit_bad_config);
    CHECK(call({"dispersion", "--law", "constant:mu=3", "--beta0", "-1", "--alpha0", "1"}).code == exit_bad_config);
    CHECK(call({"dispersion", "--beta0", "1", "--alpha0", "1"}).code == exit_bad_config);
    CHECK(call({"coeffs", "--law", "quadratic:a=1"}).code == exit_bad_config);
    CHECK(call({"regions", "--grid", "mu=2:6"}).code == exit_bad_config);
    CHECK(call({"spectrum", "--law", "constant:mu=3", "--beta0", "0.5", "--alpha0", "0.1", "--N", "8"}).code ==
          exit_bad_config);
    CHECK(call({"frobnicate"}).code == exit_bad_config);
    CHECK(call({"homoclinic", "--c1", "1", "--c3", "1"}).code == exit_bad_config);
}

TEST_CASE("numerical failure exits with code 3 and writes nothing")
{
    // The finite-depth prefactor vanishes as q -> 0 along the locus.
    const fs::path d = scratch("num");
    const fs::path out = d / "c.json";
    const Result r = call({"coeffs", "--law", "constant:mu=3", "--regime", "finite", "--q", "1e-9", "--out", out.string()});
    CHECK(r.code == exit_numerical);
    CHECK(r.err.find("prefactor") != std::string::npos);
    CHECK(fs::is_empty(d));
    CHECK(call({"coeffs", "--law", "constant:mu=3", "--regime", "finite", "--q", "0"}).code == exit_bad_config);
}

TEST_CASE("multipulse search that fails exits with code 4 and writes nothing")
{
    const fs::path d = scratch("np");
    const fs::path out = d / "orbit.csv";
    const Result r = call({"homoclinic", "--c1", "-1", "--c3", "1", "--eps", "1e-2", "--pulses", "2", "--step", "2e-2",
                           "--out", out.string()});
    CHECK(r.code == exit_not_found);
    CHECK_FALSE(fs::exists(out));
    CHECK(fs::is_empty(d));
}

TEST_CASE("outputs go to files atomically")
{
    const fs::path d = scratch("files");
    const fs::path out = d / "orbit.csv", rep = d / "orbit.json";
    const Result r = call({"homoclinic", "--c1", "-1", "--c3", "4", "--eps", "1e-2", "--out", out.string(), "--report",
                           rep.string()});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.empty());
    const std::string csv = slurp(out), js = slurp(rep);
    CHECK(csv.find("x,ReA,ImA,ReB,ImB") != std::string::npos);
    CHECK(js.find("\"closest\": \"scaling_form\"") != std::string::npos);
    CHECK(js.find("\"branches_found\": 2") != std::string::npos);
    for (const auto& e : fs::directory_iterator(d)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("regions output marks every cell")
{
    const Result r = call({"regions", "--family", "linear", "--grid", "mu=2:6:4,q=0.5:5:3", "--workers", "2"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("mu,q,c1,c3,exists\n") != std::string::npos);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'm') ++rows;
    CHECK(rows == 12);
}

TEST_CASE("profile and spectrum subcommands")
{
    const Result p = call({"profile", "--c1", "-1", "--c3", "1", "--eps", "1e-2", "--beta0q", "1.5"});
    REQUIRE(p.code == exit_ok);
    CHECK(p.out.find("x,eta\n") != std::string::npos);
    CHECK(p.out.find("\"wavelength\"") != std::string::npos);
    const Result s = call({"spectrum", "--law", "constant:mu=3", "--beta0", "0.5", "--alpha0", "0.1", "--N", "32",
                           "--window=-1:1:-5:5"});
    REQUIRE(s.code == exit_ok);
    CHECK(s.out.find("re,im,residual\n") != std::string::npos);
    const Result h = call({"hopf-locus", "--law", "constant:mu=3", "--count", "3", "--q-min", "0.5", "--q-max", "3"});
    REQUIRE(h.code == exit_ok);
    CHECK(h.out.find("0.51232643259152") != std::string::npos);
}

TEST_CASE("version and help exit cleanly")
{
    const Result v = call({"--version"});
    CHECK(v.code == exit_ok);
    CHECK(v.out.find("1.0.0") != std::string::npos);
    CHECK(call({"--help"}).code == exit_ok);
}

TEST_CASE("full linear-law map has 10000 rows and ignores the worker count")
{
    const std::vector<std::string> base{"regions", "--family", "linear", "--grid", "mu=2:6:100,q=0.5:5:100"};
    auto with = [&](const char* w) {
        auto a = base;
        a.push_back("--workers");
        a.push_back(w);
        return call(a);
    };
    const Result one = with("1"), four = with("4");
    REQUIRE(one.code == exit_ok);
    REQUIRE(four.code == exit_ok);
    std::istringstream in(one.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line.rfind("mu,", 0) != 0) ++rows;
    CHECK(rows == 10000);
    // The worker count is a scheduling choice and is not part of the hashed config.
    CHECK(one.out == four.out);
}

TEST_CASE("malformed law JSON is a bad config with no output file")
{
    const fs::path d = scratch("badjson");
    const Result r = call({"coeffs", "--law", "{\"kind\":", "--out", (d / "c.json").string()});
    CHECK(r.code == exit_bad_config);
    CHECK_FALSE(r.err.empty());
    CHECK(fs::is_empty(d));
}

TEST_CASE("options can come from a config file")
{
    const fs::path d = scratch("cfg");
    { std::ofstream(d / "run.toml") << "[coeffs]\nlaw = \"constant:mu=4\"\nregime = \"finite\"\nq = 3\n"; }
    const Result a = call({"--config", (d / "run.toml").string(), "coeffs"});
    const Result b = call({"coeffs", "--law", "constant:mu=4", "--regime", "finite", "--q", "3"});
    REQUIRE(a.code == exit_ok);
    CHECK(a.out == b.out);
}
