#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergolab/config.hpp"
#include "ergolab/runner.hpp"

using namespace ergolab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
    std::filesystem::path p =
        std::filesystem::temp_directory_path() / ("ergolab_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

const char* kMeasureText =
    "# comment line\n"
    "experiment = measure\n"
    "function.variant = trigpoly\n"
    "function.cos = 2\n";

} // namespace

TEST_CASE("defaults fill unspecified fields", "[config]") {
    RunConfig cfg = parse_config(kMeasureText);
    CHECK(cfg.kind == ExperimentKind::Measure);
    CHECK(cfg.N == 100000);
    CHECK(cfg.orbits == 8);
    CHECK(cfg.seed == 0);
    CHECK(cfg.delta_gamma == 0.05);
    CHECK(cfg.grid_count == 400);
    CHECK_FALSE(cfg.grid_lo.has_value());
    REQUIRE(cfg.alphas.size() == 1);
    CHECK(cfg.alphas[0] == Catch::Approx((std::sqrt(5.0) - 1.0) / 2.0));
    REQUIRE(cfg.function.has_value());
    CHECK(*cfg.function == cosine_function(2.0));
}

TEST_CASE("unknown keys are rejected by name", "[config]") {
    std::string text = std::string(kMeasureText) + "lyapnov_N = 10\n";
    try {
        parse_config(text);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("unknown key") != std::string::npos);
        CHECK(msg.find("lyapnov_N") != std::string::npos);
    }
}

TEST_CASE("malformed input is reported with context", "[config]") {
    CHECK_THROWS_AS(parse_config("experiment measure\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = bogus\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(""), ConfigError); // missing experiment
    CHECK_THROWS_AS(
        parse_config("experiment = measure\nexperiment = measure\n"),
        ConfigError);
    // function is mandatory except for the weight table
    CHECK_THROWS_AS(parse_config("experiment = measure\n"), ConfigError);
    CHECK_NOTHROW(parse_config("experiment = sc-weight\n"));

    try {
        parse_config(std::string(kMeasureText) + "lyap.N = 10\n");
        FAIL("expected range rejection");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("lyap.N") != std::string::npos);
    }

    // numbers must parse completely
    CHECK_THROWS_AS(parse_config(std::string(kMeasureText) + "lyap.N = 12x\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMeasureText) + "seed = -3\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(std::string(kMeasureText) + "grid.lo = -4\n"),
        ConfigError); // lo without hi
}

TEST_CASE("nested function specs parse and validate", "[config]") {
    std::string text =
        "experiment = measure\n"
        "function.variant = scaled\n"
        "function.factor = 3\n"
        "function.inner.variant = mollified\n"
        "function.inner.n = 16\n"
        "function.inner.n0 = 4\n"
        "function.inner.inner.variant = step\n"
        "function.inner.inner.breakpoints = 0, 0.5\n"
        "function.inner.inner.values = 0, 1.5\n";
    RunConfig cfg = parse_config(text);
    SamplingFunction want =
        scaled(mollify(StepFunction{{0.0, 0.5}, {0.0, 1.5}}, 16, 4), 3.0);
    CHECK(*cfg.function == want);

    // an illegal kernel width propagates as a config error
    std::string bad = text;
    bad.replace(bad.find("function.inner.n = 16"),
                std::string("function.inner.n = 16").size(),
                "function.inner.n = 1");
    bad.replace(bad.find("function.inner.n0 = 4"),
                std::string("function.inner.n0 = 4").size(),
                "function.inner.n0 = 0");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    CHECK_THROWS_AS(parse_config("experiment = measure\n"
                                 "function.variant = step\n"
                                 "function.breakpoints = 0, 0.5\n"),
                    ConfigError); // values missing
    CHECK_THROWS_AS(parse_config("experiment = measure\n"
                                 "function.cos = 2\n"),
                    ConfigError); // variant missing
}

TEST_CASE("emitted configs reparse to the same value", "[config]") {
    std::string text =
        "experiment = approximation\n"
        "seed = 12345\n"
        "threads = 2\n"
        "out_dir = some/dir\n"
        "transform.alpha = 0.41421356237309515\n"
        "function.variant = scaled\n"
        "function.factor = -1.75\n"
        "function.inner.variant = step\n"
        "function.inner.breakpoints = 0.125, 0.625\n"
        "function.inner.values = -0.5, 2.25\n"
        "grid.lo = -4.5\n"
        "grid.hi = 4.5\n"
        "grid.count = 37\n"
        "lyap.N = 12000\n"
        "lyap.orbits = 3\n"
        "delta_gamma = 0.075\n"
        "approx.schedule = 4, 16, 64\n"
        "approx.n0 = 7\n"
        "mfun.tol = 1e-10\n"
        "harmonic.radius = 0.25\n";
    RunConfig a = parse_config(text);
    RunConfig b = parse_config(emit_config(a));
    REQUIRE(a == b);
    REQUIRE(emit_config(a) == emit_config(b));

    // the one line form survives too
    std::string line = emit_config_line(a);
    std::string as_text;
    for (char c : line) as_text += (c == ';') ? '\n' : c;
    RunConfig c = parse_config(as_text);
    REQUIRE(a == c);
}

TEST_CASE("overrides replace file values", "[config]") {
    RunConfig cfg =
        parse_config(kMeasureText, {{"lyap.N", "2000"}, {"seed", "9"}});
    CHECK(cfg.N == 2000);
    CHECK(cfg.seed == 9);
    // an override can also introduce a key absent from the file
    RunConfig cfg2 = parse_config(kMeasureText, {{"grid.count", "12"}});
    CHECK(cfg2.grid_count == 12);
    // and a bad override is still a named rejection
    CHECK_THROWS_AS(parse_config(kMeasureText, {{"bogus.key", "1"}}),
                    ConfigError);
}

TEST_CASE("weight table run writes its files", "[config]") {
    std::filesystem::path dir = temp_dir("scweight");
    RunConfig cfg;
    cfg.kind = ExperimentKind::ScWeight;
    cfg.sc_C = 0.0;
    cfg.sc_count = 12;
    cfg.out_dir = dir.string();

    std::ostringstream out, err;
    RunOutput ro = run(cfg, out, err);
    REQUIRE(ro.status == 0);
    REQUIRE(err.str().empty());
    REQUIRE(std::filesystem::exists(dir / "weight.csv"));
    REQUIRE(std::filesystem::exists(dir / "report.kv"));

    std::string csv = slurp((dir / "weight.csv").string());
    CHECK(csv.rfind("# config:", 0) == 0);
    CHECK(csv.find("energy,g\n") != std::string::npos);
    // 12 data rows after comment and header
    int rows = -2;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 12);
    std::filesystem::remove_all(dir);
}

TEST_CASE("rerunning an experiment reproduces every byte", "[config]") {
    std::filesystem::path dir = temp_dir("determinism");
    RunConfig cfg;
    cfg.kind = ExperimentKind::Measure;
    cfg.function = cosine_function(2.0);
    cfg.grid_count = 12;
    cfg.N = 2000;
    cfg.orbits = 2;
    cfg.out_dir = dir.string();

    std::ostringstream out1, err1;
    REQUIRE(run(cfg, out1, err1).status == 0);
    std::string first = slurp((dir / "measure_nodes.csv").string());
    std::string first_rep = slurp((dir / "report.kv").string());

    std::ostringstream out2, err2;
    REQUIRE(run(cfg, out2, err2).status == 0);
    CHECK(slurp((dir / "measure_nodes.csv").string()) == first);
    CHECK(slurp((dir / "report.kv").string()) == first_rep);
    std::filesystem::remove_all(dir);
}

TEST_CASE("thread count never changes the data rows", "[config]") {
    std::filesystem::path dir = temp_dir("threads");
    RunConfig cfg;
    cfg.kind = ExperimentKind::LyapunovScan;
    cfg.function = cosine_function(2.0);
    cfg.grid_count = 10;
    cfg.N = 2000;
    cfg.orbits = 2;
    cfg.out_dir = dir.string();

    auto rows_of = [&](unsigned threads) {
        cfg.threads = threads;
        std::ostringstream out, err;
        REQUIRE(run(cfg, out, err).status == 0);
        std::string csv = slurp((dir / "lyapunov_scan.csv").string());
        // drop the config comment, which legitimately echoes the thread count
        return csv.substr(csv.find('\n') + 1);
    };
    std::string serial = rows_of(1);
    std::string parallel = rows_of(3);
    CHECK(serial == parallel);
    std::filesystem::remove_all(dir);
}

TEST_CASE("failed runs report the stage and fail loudly", "[config]") {
    RunConfig cfg;
    cfg.kind = ExperimentKind::Measure;
    cfg.function = cosine_function(2.0);
    cfg.grid_lo = -50.0; // far outside the certified window
    cfg.grid_hi = 50.0;
    cfg.grid_count = 4;
    cfg.N = 2000;
    cfg.orbits = 2;
    cfg.out_dir = temp_dir("failing").string();

    std::ostringstream out, err;
    RunOutput ro = run(cfg, out, err);
    CHECK(ro.status == 1);
    CHECK(err.str().find("measure") != std::string::npos);
    std::filesystem::remove_all(cfg.out_dir);
}
