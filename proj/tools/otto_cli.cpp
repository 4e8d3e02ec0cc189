// otto: command-line driver for the collective three-level engine toolkit.
//
//   otto run <config> [--output <path>]
//   otto selftest [--emit-dir <dir>]
//   otto list-experiments
//
// Exit codes: 0 success, 1 I/O or failed selftest, 2 domain or config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "otto/otto.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;

int cmd_run(const std::string& config_path, const std::string& output_flag) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open config " << config_path << '\n';
        return kExitIo;
    }
    std::ostringstream text;
    text << in.rdbuf();

    const otto::ExperimentConfig cfg = otto::parse_config(text.str());
    const otto::SweepTable table = otto::run_experiment(cfg);

    std::string out_path = output_flag;
    if (out_path.empty() && cfg.output) out_path = *cfg.output;
    if (out_path.empty()) {
        table.write_csv(std::cout);
        std::cout.flush();
        return std::cout ? 0 : kExitIo;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << '\n';
        return kExitIo;
    }
    table.write_csv(out);
    return out ? 0 : kExitIo;
}

int cmd_selftest(const std::string& emit_dir) {
    const std::filesystem::path dir(emit_dir);
    const otto::SelftestOutcome r = otto::run_selftest(std::cout, emit_dir.empty() ? nullptr : &dir);
    std::cout << r.passed << " passed, " << r.failed << " failed\n";
    return r.ok() ? 0 : kExitIo;
}

int cmd_list() {
    for (const auto& info : otto::kExperiments) std::cout << info.name << '\t' << info.summary << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective three-level heat engine simulator"};
    app.require_subcommand(1);

    std::string config_path, output, emit_dir;
    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "key=value config file")->required();
    run->add_option("-o,--output", output, "CSV destination (default: config 'output' key, else stdout)");

    auto* selftest = app.add_subcommand("selftest", "run the randomized invariant suite");
    selftest->add_option("--emit-dir", emit_dir, "also write the figure CSVs into this directory");

    auto* list = app.add_subcommand("list-experiments", "print the available experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, output);
        if (*selftest) return cmd_selftest(emit_dir);
        if (*list) return cmd_list();
    } catch (const otto::Error& e) {
        std::cerr << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
