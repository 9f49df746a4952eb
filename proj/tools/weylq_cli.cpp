// weylq: run a problem description and print the exact report.
//
// Exit codes: 0 success, 2 invalid configuration, 3 internal-consistency failure.

#include "weylq/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Critical log terms, L1 ladder and the Q-curvature tractor on Einstein models"};
    std::string config_path;
    std::string format = "json";
    int truncation = 0;
    int jobs = weylq::default_jobs();
    app.add_option("--config", config_path, "problem description (JSON)")->required();
    app.add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--truncation", truncation, "series truncation order (default n+2)");
    app.add_option("--jobs", jobs, "worker threads for the per-mode loop (default $WEYLQ_JOBS or 1)")
        ->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return 2;
    }
    std::stringstream text;
    text << in.rdbuf();

    try {
        weylq::ProblemConfig config = weylq::parse_config_text(text.str());
        if (truncation != 0) {
            if (truncation < config.n) throw weylq::ConfigError("--truncation must be >= n");
            config.truncation_order = truncation;
        }
        const weylq::RunResult result = weylq::run(config, jobs);
        if (format == "json")
            std::cout << result.report.dump(2) << "\n";
        else
            std::cout << weylq::render_table(result.report);
        if (!result.ok()) {
            for (const auto& c : result.checks)
                if (!c.pass) std::cerr << "consistency failure: " << c.name << ": " << c.lhs << " != " << c.rhs << "\n";
            return 3;
        }
        return 0;
    } catch (const weylq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const weylq::InvalidDimension& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const weylq::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const weylq::ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const weylq::SeriesError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
