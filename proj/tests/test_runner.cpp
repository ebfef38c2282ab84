#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gp/errors.hpp"
#include "runner/commands.hpp"
#include "runner/config.hpp"
#include "runner/serialize.hpp"
#include "runner/sha256.hpp"

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::path("runner_out") / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("sha256 matches the published vectors") {
    CHECK(runner::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(runner::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(runner::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    CHECK(runner::sha256_hex(std::string(1000000, 'a')) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");

    SUBCASE("chunked updates agree with the one-shot digest") {
        std::string msg;
        for (int i = 0; i < 150; ++i) msg += char('a' + i % 26);
        runner::Sha256 h;
        for (size_t at = 0; at < msg.size(); at += 7)
            h.update(msg.data() + at, std::min<size_t>(7, msg.size() - at));
        CHECK(h.hex_digest() == runner::sha256_hex(msg));
    }
}

TEST_CASE("format_double round-trips exactly") {
    const double values[] = {0.0,     1.0,   -1.0,          0.1,     1.0 / 3.0,
                             3.14159, 1e-300, 6.02214076e23, -7.25e-12, 5.783185962946785};
    for (double v : values) {
        const std::string s = runner::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(runner::format_double(1.0) == "1");
    CHECK(runner::format_double(-0.5) == "-0.5");
}

TEST_CASE("csv builder wraps rows at the declared width") {
    runner::CsvBuilder csv({"a", "b"});
    csv.cell(1).cell(2.5).cell("x").cell(-3);
    CHECK(csv.str() == "a,b\n1,2.5\nx,-3\n");
}

TEST_CASE("config defaults fill in") {
    const runner::RunConfig cfg = runner::parse_config_text(R"({"command":"spectrum"})");
    CHECK(cfg.command == "spectrum");
    CHECK(!cfg.kernel_given);
    CHECK(cfg.R == 1.0);
    CHECK(cfg.m_max == 2);
    CHECK(cfg.n_max == 2);
    CHECK(cfg.roots_m == 1);
    CHECK(cfg.roots_n_hi == 40);
    CHECK(cfg.target_auto);
    CHECK(cfg.T == 10.0);
    CHECK(cfg.h == 0.0);
    CHECK(cfg.n_alpha == 32);
    REQUIRE(cfg.xi.size() == 1);
    CHECK(cfg.xi[0].m == 0);
    CHECK(cfg.xi[0].n == 1);
    CHECK(cfg.xi[0].value == gp::Complex(1.0, 0.0));
    REQUIRE(cfg.snapshots.size() == 2);
    CHECK(cfg.snapshots[1] == cfg.T);
    CHECK(cfg.schedule == std::vector<int>{5, 10, 15, 20, 25});
    CHECK(cfg.thresholds.cluster_eps == 0.1);
    CHECK(cfg.convention == gp::CouplingSign::relaxing);
    CHECK(cfg.out == "out");
    CHECK(cfg.threads == 0);
}

TEST_CASE("config rejects malformed documents") {
    using runner::parse_config_text;

    CHECK_THROWS_AS(parse_config_text("{nope"), runner::ParseError);
    CHECK_THROWS_AS(parse_config_text("[1,2]"), runner::ParseError);
    CHECK_THROWS_AS(runner::parse_config("/nonexistent/gp.json"), runner::ParseError);

    CHECK_THROWS_AS(parse_config_text(R"({})"), gp::DomainError);
    CHECK_THROWS_AS(parse_config_text(R"({"command":"warp"})"), gp::DomainError);
    CHECK_THROWS_AS(parse_config_text(R"({"command":"spectrum","kernell":{}})"),
                    gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"spectrum","modes":{"m_max":2,"maxn":3}})"),
        gp::DomainError);
    CHECK_THROWS_AS(parse_config_text(R"({"command":"roots"})"), gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"kernel","kernel":{"terms":[[1,1]]}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"kernel","kernel":{"type":"spline"}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(
            R"({"command":"kernel","kernel":{"type":"expsum","terms":[[1,2],[1,2]]}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(
            R"({"command":"kernel","kernel":{"type":"expsum","terms":[[-1,2]]}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"kernel","kernel":{"type":"constant"}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"spectrum","geometry":{"R":-1.0}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"spectrum","time":{"T":10,"h":-0.1}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"spectrum","xi":{"modes":[[0,1,1]]}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"spectrum","snapshots":[0,"end"]})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"command":"stability","stability":{"q_steps":1}})"),
        gp::DomainError);
    CHECK_THROWS_AS(
        parse_config_text(
            R"({"command":"stability","stability":{"convention":"sideways"}})"),
        gp::DomainError);
    CHECK_THROWS_AS(parse_config_text(R"({"command":"spectrum","threads":-1})"),
                    gp::DomainError);
    CHECK_THROWS_AS(parse_config_text(R"({"command":"spectrum","out":""})"),
                    gp::DomainError);
}

TEST_CASE("config echo round-trips") {
    const std::string text = R"({
        "command": "roots",
        "kernel": {"type": "expsum", "terms": [[1.0, 1.0], [1.0, 2.0]]},
        "geometry": {"R": 2.0},
        "roots": {"m": 3, "n_lo": 2, "n_hi": 7, "target": [-1.5, 0.0]},
        "time": {"T": 5.0, "h": 0.01},
        "threads": 2,
        "out": "elsewhere"
    })";
    const runner::RunConfig cfg = runner::parse_config_text(text);
    CHECK(cfg.R == 2.0);
    CHECK(cfg.roots_m == 3);
    CHECK(!cfg.target_auto);
    CHECK(cfg.target == gp::Complex(-1.5, 0.0));
    CHECK(cfg.out == "elsewhere");

    const runner::RunConfig again = runner::parse_config_text(cfg.echo.dump());
    CHECK(again.echo == cfg.echo);
    CHECK(again.R == cfg.R);
    CHECK(again.roots_n_lo == cfg.roots_n_lo);
    CHECK(again.roots_n_hi == cfg.roots_n_hi);
    CHECK(again.target == cfg.target);
    CHECK(again.T == cfg.T);
    CHECK(again.h == cfg.h);
    CHECK(again.threads == cfg.threads);
}

TEST_CASE("spectrum command writes modes and a coherent manifest") {
    runner::RunConfig cfg = runner::parse_config_text(
        R"({"command":"spectrum","modes":{"m_max":1,"n_max":2}})");
    const auto dir = fresh_dir("spectrum");
    cfg.out = dir.string();
    cfg.echo["out"] = cfg.out;

    const runner::RunManifest man = runner::run(cfg);
    REQUIRE(man.files.size() == 1);
    CHECK(man.files[0].first == "modes.csv");

    const std::string csv = read_file(dir / "modes.csv");
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "m,n,mu,lambda_sq");
    CHECK(lines[1].substr(0, 21) == "0,1,2.404825557695773");

    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["command"] == "spectrum");
    CHECK(manifest["version"] == runner::kToolVersion);
    CHECK(manifest["files"]["modes.csv"]["bytes"] == csv.size());
    CHECK(manifest["files"]["modes.csv"]["sha256"] == runner::sha256_hex(csv));

    const runner::RunConfig echoed =
        runner::parse_config_text(manifest["config"].dump());
    CHECK(echoed.echo == cfg.echo);
}

TEST_CASE("repeated runs are byte-identical across thread counts") {
    const std::string text = R"({
        "command": "roots",
        "kernel": {"type": "expsum", "terms": [[1.0, 1.0], [1.0, 2.0]]},
        "roots": {"m": 1, "n_lo": 1, "n_hi": 12}
    })";
    auto run_to = [&](const std::string& name, int threads) {
        runner::RunConfig cfg = runner::parse_config_text(text);
        cfg.out = fresh_dir(name).string();
        cfg.threads = threads;
        runner::run(cfg);
        return read_file(std::filesystem::path(cfg.out) / "roots.csv");
    };
    const std::string a = run_to("roots_t1", 1);
    const std::string b = run_to("roots_t4", 4);
    const std::string c = run_to("roots_t4_again", 4);
    CHECK(a == b);
    CHECK(b == c);
    CHECK(lines_of(a).size() == 13);
}

TEST_CASE("kernel command reports the transform") {
    SUBCASE("exp-sum kernels carry the rational transform") {
        runner::RunConfig cfg = runner::parse_config_text(
            R"({"command":"kernel","kernel":{"type":"expsum","terms":[[1.0,1.0],[1.0,2.0]]},
                "time":{"T":8.0}})");
        const auto dir = fresh_dir("kernel_expsum");
        cfg.out = dir.string();
        runner::run(cfg);

        const auto lines = lines_of(read_file(dir / "kernel.csv"));
        REQUIRE(lines.size() == 202);
        CHECK(lines[0] == "t,K");
        CHECK(lines[1] == "0,2");

        const auto khat = nlohmann::json::parse(read_file(dir / "khat.json"));
        CHECK(khat["rational"] == true);
        CHECK(khat["k0"] == 2.0);
        REQUIRE(khat["zeros"].size() == 1);
        CHECK(khat["zeros"][0][0].get<double>() == doctest::Approx(-1.5).epsilon(1e-12));
        CHECK(khat["zeros"][0][1].get<double>() == doctest::Approx(0.0));
    }

    SUBCASE("tabulated kernels are flagged as non-rational") {
        runner::RunConfig cfg = runner::parse_config_text(
            R"({"command":"kernel",
                "kernel":{"type":"tabulated","samples":[1.0,0.8,0.65,0.52,0.42,0.34],"step":0.5},
                "time":{"T":8.0}})");
        const auto dir = fresh_dir("kernel_tab");
        cfg.out = dir.string();
        runner::run(cfg);

        const auto khat = nlohmann::json::parse(read_file(dir / "khat.json"));
        CHECK(khat["rational"] == false);
        CHECK(khat["k0"] == 1.0);
        // Horizon clamps to the tabulated range (5 * 0.5).
        const auto lines = lines_of(read_file(dir / "kernel.csv"));
        CHECK(lines.back().substr(0, 4) == "2.5,");
    }
}

TEST_CASE("simulate command produces decaying norms and snapshots") {
    const std::string text = R"({
        "command": "simulate",
        "kernel": {"type": "expsum", "terms": [[1.0, 1.0], [1.0, 2.0]]},
        "modes": {"m_max": 1, "n_max": 1},
        "time": {"T": 2.0, "h": 0.01},
        "grid": {"n_alpha": 16, "radial_points": 8, "radial_panels": 8},
        "xi": {"modes": [[0, 1, 1.0, 0.0]]},
        "snapshots": [0.0, 2.0]
    })";
    runner::RunConfig cfg = runner::parse_config_text(text);
    const auto dir = fresh_dir("simulate");
    cfg.out = dir.string();
    runner::run(cfg);

    const auto norm_lines = lines_of(read_file(dir / "norms.csv"));
    REQUIRE(norm_lines.size() == 202);
    CHECK(norm_lines[0] == "t,norm");
    const double first = std::strtod(norm_lines[1].substr(2).c_str(), nullptr);
    const auto last_comma = norm_lines.back().find(',');
    const double last =
        std::strtod(norm_lines.back().substr(last_comma + 1).c_str(), nullptr);
    CHECK(first == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(last < first);

    const auto snap_lines = lines_of(read_file(dir / "snapshot_0.csv"));
    CHECK(snap_lines.size() == size_t(1 + 64 * 16));
    CHECK(std::filesystem::exists(dir / "snapshot_1.csv"));

    const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
    CHECK(report["steps"] == 200);
    REQUIRE(report["solvers"].size() == 1);
    CHECK(report["solvers"][0] == "exact");
    CHECK(report["truncation_tail"].get<double>() < 1e-8);
    REQUIRE(report["snapshots"].size() == 2);
    CHECK(report["snapshots"][1]["t"] == 2.0);
}

TEST_CASE("simulate rejects initial modes outside the configured set") {
    runner::RunConfig cfg = runner::parse_config_text(R"({
        "command": "simulate",
        "kernel": {"type": "expsum", "terms": [[1.0, 1.0]]},
        "modes": {"m_max": 1, "n_max": 1},
        "xi": {"modes": [[5, 1, 1.0, 0.0]]}
    })");
    cfg.out = fresh_dir("simulate_bad_xi").string();
    CHECK_THROWS_WITH_AS(runner::run(cfg), doctest::Contains("(5, 1)"), gp::DomainError);
}

TEST_CASE("certify command emits the schedule table and verdict") {
    runner::RunConfig cfg = runner::parse_config_text(R"({
        "command": "certify",
        "kernel": {"type": "expsum", "terms": [[1.0, 1.0], [1.0, 2.0]]},
        "certify": {"T": 4.0, "schedule": [3, 5]}
    })");
    const auto dir = fresh_dir("certify");
    cfg.out = dir.string();
    runner::run(cfg);

    const auto lines = lines_of(read_file(dir / "certify.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "count,norm,condition,residual,cut_count");

    const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
    const std::string verdict = report["verdict"].get<std::string>();
    CHECK((verdict == "obstructed" || verdict == "unobstructed" ||
           verdict == "inconclusive"));
    CHECK(report["schedule"] == nlohmann::json::array({3, 5}));
    CHECK(report["thresholds"]["obstruction_growth"] == 4.0);
}

TEST_CASE("stability command sweeps the coupling range") {
    runner::RunConfig cfg = runner::parse_config_text(R"({"command":"stability"})");
    const auto dir = fresh_dir("stability");
    cfg.out = dir.string();
    runner::run(cfg);

    const std::string csv = read_file(dir / "stability.csv");
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == size_t(1 + 41 * 4));
    CHECK(lines[0] == "q,omega_sq,max_re_root,verdict");
    CHECK(csv.find("unstable") != std::string::npos);
    CHECK(csv.find(",stable") != std::string::npos);

    const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
    CHECK(report["convention"] == "relaxing");
    CHECK(report["strict_interval"] == nlohmann::json::array({0.0, 1.0}));
}

TEST_CASE("roots with no trackable target fails as validation") {
    runner::RunConfig cfg = runner::parse_config_text(R"({
        "command": "roots",
        "kernel": {"type": "constant", "value": 1.0}
    })");
    cfg.out = fresh_dir("roots_no_target").string();
    CHECK_THROWS_AS(runner::run(cfg), gp::NoTargetError);
}

}  // TEST_SUITE
