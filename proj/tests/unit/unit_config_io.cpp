#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "slsamp/config.hpp"
#include "slsamp/io.hpp"

using namespace slsamp;

namespace {

std::string data_path(const char* name) {
    return std::string(SLSAMP_TEST_DATA) + "/" + name;
}

// minimal complete config, mutated per test
std::string base_config() {
    return "[interval]\na = 0\nc1 = 1\nc2 = 2\nb = 3\n"
           "[boundary]\nbeta1 = 0\nbeta2 = 1\nalpha1 = 1\nalpha2 = 0\n"
           "alpha1p = 0\nalpha2p = -1\n"
           "[transmission]\ndelta = 1\ngamma = 1\n";
}

}  // namespace

TEST_CASE("the reference config loads with all fields in place") {
    RunConfig cfg = load_config(data_path("p0.ini"));
    const RawProblem& r = cfg.problem.raw();
    CHECK(r.a == 0.0);
    CHECK(r.c1 == 1.0);
    CHECK(r.c2 == 2.0);
    CHECK(r.b == 3.0);
    CHECK(r.beta1 == 0.0);
    CHECK(r.beta2 == 1.0);
    CHECK(r.alpha1 == 1.0);
    CHECK(r.alpha2 == 0.0);
    CHECK(r.alpha1p == 0.0);
    CHECK(r.alpha2p == -1.0);
    CHECK(r.delta == 1.0);
    CHECK(r.gamma == 1.0);
    CHECK(cfg.problem.q_is_zero());
    CHECK(cfg.solver.n_eigs == 30);
    CHECK(cfg.solver.tol_ode == 1e-10);
    CHECK(cfg.solver.tol_root == 1e-12);
    CHECK(std::isnan(cfg.solver.lambda_min));
    CHECK(std::isnan(cfg.solver.lambda_max));
    CHECK(cfg.sampling.g_given);
    // g = poly:[0,3,-1] is x(3-x)
    CHECK(cfg.sampling.g.eval(1, 1.5) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(cfg.sampling.probes.empty());
    CHECK(cfg.sampling.n_schedule.empty());
    // config identity is the hash of the raw bytes; output headers carry it
    CHECK(cfg.fingerprint == 0x9c3d1cfd85b240e3ull);
}

TEST_CASE("the linear potential config loads its per-segment polynomials") {
    RunConfig cfg = load_config(data_path("qx.ini"));
    CHECK_FALSE(cfg.problem.q_is_zero());
    CHECK(cfg.problem.q(0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cfg.problem.q(2, 2.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(cfg.solver.n_eigs == 12);
    CHECK(cfg.fingerprint == 0xd5cb66922cc1add3ull);
}

TEST_CASE("parse diagnostics carry the file and line") {
    // unknown keys are reported once the required ones are accounted for
    CHECK_THROWS_WITH_AS(parse_config(base_config() + "bogus = 1\n", "cfg"),
                         "cfg:16: unknown key 'bogus' in section [transmission]", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[interval]\na = 0\na = 1\n", "cfg"),
                         "cfg:3: duplicate key 'a'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("a = 0\n", "cfg"),
                         "cfg:1: key 'a' outside any section", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[interval\n", "cfg"), "cfg:1: unterminated section header",
                         ConfigError);
    // unknown sections anchor the diagnostic at their first entry
    CHECK_THROWS_WITH_AS(parse_config("[bogus]\nx = 1\n", "cfg"), "cfg:2: unknown section [bogus]",
                         ConfigError);
    // reopening a section is allowed (keys merge), re-setting a key is not
    CHECK_NOTHROW(parse_config(base_config() + "[interval]\n", "cfg"));
    CHECK_THROWS_WITH_AS(parse_config(base_config() + "[interval]\na = 5\n", "cfg"),
                         "cfg:17: duplicate key 'a'", ConfigError);
}

TEST_CASE("missing required pieces are reported by name") {
    std::string no_boundary =
        "[interval]\na = 0\nc1 = 1\nc2 = 2\nb = 3\n[transmission]\ndelta = 1\ngamma = 1\n";
    try {
        parse_config(no_boundary, "cfg");
        FAIL("incomplete config accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("[boundary]") != std::string::npos);
    }
    std::string no_b =
        "[interval]\na = 0\nc1 = 1\nc2 = 2\n"
        "[boundary]\nbeta1 = 0\nbeta2 = 1\nalpha1 = 1\nalpha2 = 0\n"
        "alpha1p = 0\nalpha2p = -1\n[transmission]\ndelta = 1\ngamma = 1\n";
    try {
        parse_config(no_b, "cfg");
        FAIL("missing key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("missing key 'b'") != std::string::npos);
    }
}

TEST_CASE("malformed values are rejected at their line") {
    CHECK_THROWS_AS(parse_config(base_config() + "[solver]\ntol_ode = zebra\n", "cfg"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[solver]\ntol_ode = -1\n", "cfg"), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[solver]\nn_eigs = 2.5\n", "cfg"), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[sampling]\ng = poly:[1,2\n", "cfg"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[sampling]\ng = spline:[1]\n", "cfg"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[sampling]\nprobes = [1, oops]\n", "cfg"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config() + "[sampling]\nn_schedule = [0]\n", "cfg"),
                    ConfigError);
    // problem-level validation propagates as ProblemError (the CLI maps both
    // to the config-error exit code)
    CHECK_THROWS_WITH_AS(
        parse_config("[interval]\na = 0\nc1 = 1\nc2 = 2\nb = 3\n"
                     "[boundary]\nbeta1 = 0\nbeta2 = 1\nalpha1 = 1\nalpha2 = 0\n"
                     "alpha1p = 0\nalpha2p = -1\n[transmission]\ndelta = -1\ngamma = 1\n",
                     "cfg"),
        "delta must be positive", ProblemError);
}

TEST_CASE("optional solver and sampling settings are honored") {
    RunConfig cfg = parse_config(base_config() +
                                     "[solver]\ntol_ode = 1e-8\ntol_root = 1e-9\nn_eigs = 7\n"
                                     "lambda_min = -20\nlambda_max = 500\n"
                                     "[sampling]\nprobes = [1.5, 2.5]\nn_schedule = [5, 10]\n",
                                 "cfg");
    CHECK(cfg.solver.tol_ode == 1e-8);
    CHECK(cfg.solver.tol_root == 1e-9);
    CHECK(cfg.solver.n_eigs == 7);
    CHECK(cfg.solver.lambda_min == -20.0);
    CHECK(cfg.solver.lambda_max == 500.0);
    CHECK(cfg.sampling.probes == std::vector<double>{1.5, 2.5});
    CHECK(cfg.sampling.n_schedule == std::vector<int>{5, 10});
    CHECK_FALSE(cfg.sampling.g_given);
    CHECK(cfg.sampling.g.is_zero());
}

TEST_CASE("table references resolve relative to the config directory") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "slsamp_cfg_test";
    fs::create_directories(dir);
    {
        std::ofstream t(dir / "qtab.txt");
        t << "# linear ramp\n0.0 0.0\n0.5, 0.5\n1.0 1.0\n";
    }
    std::string cfg_text =
        "[interval]\na = 0\nc1 = 1\nc2 = 2\nb = 3\n"
        "[potential]\nseg1 = table:qtab.txt\nseg2 = poly:[0]\nseg3 = poly:[0]\n"
        "[boundary]\nbeta1 = 0\nbeta2 = 1\nalpha1 = 1\nalpha2 = 0\n"
        "alpha1p = 0\nalpha2p = -1\n[transmission]\ndelta = 1\ngamma = 1\n";
    RunConfig cfg = parse_config(cfg_text, (dir / "run.ini").string());
    CHECK(cfg.problem.q(0, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
    // missing file mentions the resolved path
    std::string bad = cfg_text;
    bad.replace(bad.find("qtab.txt"), 8, "gone.txt");
    try {
        parse_config(bad, (dir / "run.ini").string());
        FAIL("missing table accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gone.txt") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("number rendering round-trips through 17 significant digits") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-308, 1e300, 3.141592653589793, -0.0, 42341.060530921452}) {
        std::string s = format_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(format_g17(1.5) == "1.5");
    CHECK(format_g17(0.0) == "0");
}

TEST_CASE("fingerprints render as fixed-width hex") {
    CHECK(format_hex16(0) == "0000000000000000");
    CHECK(format_hex16(0x9c3d1cfd85b240e3ull) == "9c3d1cfd85b240e3");
    CHECK(format_hex16(0xffffffffffffffffull) == "ffffffffffffffff");
}

TEST_CASE("csv bytes are exactly specified") {
    OutputTable t;
    t.tool = "demo";
    t.fingerprint = 0x1;
    t.notes = {"lambda_floor -9.9375"};
    t.columns = {"x [1]", "name [text]"};
    t.row({"1.5", "abc"});
    t.row({"-2", "d e"});
    CHECK(render_csv(t) ==
          "# slsamp demo config=0000000000000001\n"
          "# lambda_floor -9.9375\n"
          "x [1],name [text]\n"
          "1.5,abc\n"
          "-2,d e\n");
    CHECK_THROWS_AS(t.row({"only one"}), IoError);
}

TEST_CASE("json output parses and types cells by content") {
    OutputTable t;
    t.tool = "demo";
    t.fingerprint = 0xabc;
    t.notes = {"note \"quoted\""};
    t.columns = {"x [1]", "name [text]"};
    t.row({"1.5", "abc"});
    t.row({"2.5e-3", "-inf"});
    auto j = nlohmann::json::parse(render_json(t));
    CHECK(j["tool"] == "demo");
    CHECK(j["config"] == "0000000000000abc");
    CHECK(j["notes"][0] == "note \"quoted\"");
    CHECK(j["rows"][0][0] == 1.5);
    CHECK(j["rows"][0][1] == "abc");
    CHECK(j["rows"][1][0] == 2.5e-3);
    // not a finite number, must stay a string
    CHECK(j["rows"][1][1] == "-inf");
}

TEST_CASE("numeric cell detection") {
    CHECK(cell_is_number("1.5"));
    CHECK(cell_is_number("-2e-5"));
    CHECK(cell_is_number(".5"));
    CHECK(cell_is_number("+3"));
    CHECK_FALSE(cell_is_number(""));
    CHECK_FALSE(cell_is_number("abc"));
    CHECK_FALSE(cell_is_number("1.5x"));
    CHECK_FALSE(cell_is_number("inf"));
    CHECK_FALSE(cell_is_number("-inf"));
    CHECK_FALSE(cell_is_number("nan"));
    CHECK_FALSE(cell_is_number("2.2219328i"));
}

TEST_CASE("json string escaping") {
    CHECK(json_quote("plain") == "\"plain\"");
    CHECK(json_quote("a\"b\\c") == "\"a\\\"b\\\\c\"");
    CHECK(json_quote("line\nbreak\ttab") == "\"line\\nbreak\\ttab\"");
    CHECK(json_quote(std::string(1, '\x01')) == "\"\\u0001\"");
}

TEST_CASE("text files are written byte-for-byte") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "slsamp_io_test";
    fs::create_directories(dir);
    std::string content = "alpha\nbeta\n";
    write_text_file((dir / "t.txt").string(), content);
    std::ifstream in(dir / "t.txt", std::ios::binary);
    std::string got((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(got == content);
    CHECK_THROWS_AS(write_text_file((dir / "no_dir" / "t.txt").string(), content), IoError);
    fs::remove_all(dir);
}
