#include "weylq/report.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using namespace weylq;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json run_config(const std::string& text, int jobs = 1) {
    const RunResult r = run(parse_config_text(text), jobs);
    REQUIRE(r.ok());
    return r.report;
}

json run_file(const std::string& name, int jobs = 1) {
    return run_config(read_file(fs::path(WEYLQ_CONFIG_DIR) / name), jobs);
}

struct Invocation {
    int code = -1;
    std::string out;
};

Invocation invoke(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / ("weylq_cli_test_" + std::to_string(::getpid()) + ".out");
    const std::string cmd = std::string(WEYLQ_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Invocation inv;
    inv.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    inv.out = read_file(out);
    fs::remove(out);
    return inv;
}

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("weylq_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("S^4 q_curvature report") {
    const json r = run_file("sphere4_q_curvature.json");
    CHECK(r.at("q_curvature").at("s") == "-3/8");
    CHECK(r.at("q_curvature").at("q_h") == "6");
    CHECK(r.at("smoothness").at("smooth") == false);
    CHECK(r.at("invariant").at("invariant").at("text") == "6*vol(S^4)");
    for (const auto& c : r.at("consistency_checks")) CHECK(c.at("pass") == true);
}

TEST_CASE("symbolic L1 on three routes") {
    const json t = run_file("torus4_symbolic_l1.json");
    bool found = false;
    for (const auto& e : t.at("l1_spectrum").at("entries"))
        if (e.at("label") == "mu=mu") {
            found = true;
            CHECK(e.at("l1_frobenius") == json::array({"0", "1/2"}));
            CHECK(e.at("l1_ladder") == e.at("l1_frobenius"));
            CHECK(e.at("l1_product") == e.at("l1_frobenius"));
        }
    CHECK(found);

    const json six = run_file("einstein6_symbolic_l1.json");
    const json& e = six.at("l1_spectrum").at("entries").at(0);
    CHECK(e.at("l1_frobenius") == json::array({"0", "-1/8", "-1/16"}));
    CHECK(e.at("l1_ladder") == e.at("l1_frobenius"));
    CHECK(e.at("l1_product") == e.at("l1_frobenius"));
    CHECK(six.at("ladder_check").at("sl2_relations") == true);
}

TEST_CASE("the as-printed drift makes the cross-path check fail") {
    const RunResult r =
        run(parse_config_text(read_file(fs::path(WEYLQ_CONFIG_DIR) / "einstein6_printed_drift.json")), 1);
    CHECK_FALSE(r.ok());
}

TEST_CASE("reports are byte-deterministic and independent of the job count") {
    for (const char* name : {"torus4_functional.json", "sphere6_rescale.json"}) {
        const std::string a = run_file(name, 1).dump(2);
        const std::string b = run_file(name, 1).dump(2);
        const std::string c = run_file(name, 4).dump(2);
        CHECK(a == b);
        CHECK(a == c);
    }
}

TEST_CASE("report round trip and table rendering") {
    const json r = run_file("torus4_functional.json");
    const json back = json::parse(r.dump(2));
    CHECK(back.dump(2) == r.dump(2));
    CHECK(render_table(back) == render_table(r));

    const std::string sphere = render_table(run_file("sphere4_q_curvature.json"));
    CHECK(sphere.find("smooth: NO (bottom = -3/2 on constant mode)") != std::string::npos);
    const std::string harmonic = render_table(run_file("torus4_harmonic.json"));
    CHECK(harmonic.find("smooth: YES, Q_tractor = 0") != std::string::npos);

    const std::string header_only = render_table(run_config(R"({"n": 4, "backend": "torus"})"));
    CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
}

TEST_CASE("functional and rescale sections") {
    const json r = run_file("torus4_functional.json");
    const json& f = r.at("functional");
    CHECK(f.at("entries").at(1).at("second_term") == "2");
    CHECK(f.at("minimizers") == json::array({0, 2}));
    CHECK(f.at("zero_iff_closed") == true);
    for (const auto& s : r.at("rescale_check")) CHECK(s.at("all_pass") == true);
    CHECK(r.at("rescale_check").size() == 2);
    CHECK(r.at("seed") == 7);
}

TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 5, "backend": "torus"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 4, "backend": "klein"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 4, "backend": "torus", "tasks": ["everything"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 4, "backend": "torus", "lambda": "1"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 4, "backend": "torus", "truncation_order": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": 4, "backend": "torus", "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(
                        R"({"n": 4, "backend": "torus", "beta": {"coclosed": [{"mu": "symbolic", "coeff": 1}]},
                            "tasks": ["invariant"]})"),
                    ConfigError);
    // References that the model cannot satisfy.
    CHECK_THROWS_AS(run(parse_config_text(R"({"n": 4, "backend": "sphere", "beta": {"exact": [{"kappa": 5, "coeff": 1}]}})")),
                    ConfigError);
    CHECK_THROWS_AS(run(parse_config_text(R"({"n": 4, "backend": "sphere", "beta": {"harmonic": [{"coeff": 1}]}})")),
                    ConfigError);
    CHECK_THROWS_AS(run(parse_config_text(R"({"n": 4, "backend": "custom", "lambda": "1", "harmonic_rank": 1,
                                             "scalar_modes": [{"kappa": 0, "multiplicity": 1}]})")),
                    ConfigError);
    CHECK_THROWS_AS(run(parse_config_text(R"({"n": 4, "backend": "torus", "scale_factors": [2],
                                             "tasks": ["rescale_check"]})")),
                    ConfigError);
}

TEST_CASE("command-line exit codes and output formats") {
    const std::string dir = WEYLQ_CONFIG_DIR;
    const Invocation ok = invoke("--config " + dir + "/sphere4_q_curvature.json");
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out).at("q_curvature").at("q_h") == "6");
    const Invocation again = invoke("--config " + dir + "/sphere4_q_curvature.json --jobs 3");
    CHECK(again.out == ok.out);

    const Invocation table = invoke("--config " + dir + "/sphere4_q_curvature.json --format table");
    CHECK(table.code == 0);
    CHECK(table.out.find("smooth: NO (bottom = -3/2 on constant mode)") != std::string::npos);

    const Invocation trunc = invoke("--config " + dir + "/sphere4_q_curvature.json --truncation 10");
    CHECK(trunc.code == 0);
    CHECK(json::parse(trunc.out).at("truncation_order") == 10);
    CHECK(json::parse(trunc.out).at("q_curvature").at("q_h") == "6");

    CHECK(invoke("--config " + dir + "/sphere4_q_curvature.json --truncation 2").code == 2);
    CHECK(invoke("--config /nonexistent/config.json").code == 2);
    CHECK(invoke("--config " + dir + "/sphere4_q_curvature.json --format xml").code == 2);
    const fs::path bad = write_temp("bad.json", R"({"n": 3, "backend": "torus"})");
    CHECK(invoke("--config " + bad.string()).code == 2);
    fs::remove(bad);

    CHECK(invoke("--config " + dir + "/einstein6_printed_drift.json").code == 3);
}
