#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotlab/scenario.hpp"

namespace {

nlohmann::json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw rotlab::ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotlab: rotation vectors, homology cones, rotation sets and Mather functions"};
    app.require_subcommand(1);

    std::string run_path, out_dir;
    int parallel = 1;
    auto* run = app.add_subcommand("run", "run a scenario and write its report");
    run->add_option("config", run_path, "scenario configuration (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides output_dir)");
    run->add_option("--parallel", parallel, "worker threads inside the scenario")->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a configuration without running it");
    validate->add_option("config", validate_path, "scenario configuration (JSON)")->required();

    auto* list = app.add_subcommand("list-scenarios", "list the available scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& id : rotlab::scenario_ids()) std::cout << id << "\t" << rotlab::scenario_summary(id) << "\n";
            return 0;
        }
        if (*validate) {
            const auto diags = rotlab::validate_config(load(validate_path));
            for (const auto& d : diags) std::cout << d << "\n";
            return diags.empty() ? 0 : 2;
        }
        const auto config = rotlab::parse_config(load(run_path));
        const std::string dir = !out_dir.empty() ? out_dir : (!config.output_dir.empty() ? config.output_dir : ".");
        const auto out = rotlab::run_scenario(config, parallel);
        rotlab::write_outputs(out, dir);
        const auto& rep = out.report;
        if (!rep.error.empty()) {
            std::cerr << "error: " << rep.error << "\n";
            return 1;
        }
        for (const auto& c : rep.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (" << c.relation << " "
                      << c.threshold << ")\n";
        std::cout << "report: " << dir << "/report.json\n";
        return rep.passed() ? 0 : 2;
    } catch (const rotlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
