// decoheat: command-line front end
//
//   decoheat <experiment> [--config <path>] [--output <path>] [--threads N] [--no-timestamp]
//   decoheat <experiment> --replay <csv>   (rerun the configuration echoed in a CSV header)

#include "decoheat/config.hpp"
#include "decoheat/errors.hpp"
#include "decoheat/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw decoheat::IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace decoheat::cli;

    CLI::App app{"Thermodynamics of pure decoherence: a qubit dephasing in a fermionic lattice"};
    std::string experiment;
    std::string config_path;
    std::string replay_path;
    std::string output;
    int threads = -1;
    bool no_timestamp = false;
    bool quiet = false;

    app.add_option("experiment", experiment,
                   "decoherence | heat-vs-time | heat-distribution | heat-vs-temperature | validate")
        ->required();
    auto* config_opt = app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--replay", replay_path, "reuse the configuration echoed in a CSV header")
        ->excludes(config_opt);
    app.add_option("--output", output, "CSV output path (overrides the config)");
    app.add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp comment for byte-identical reruns");
    app.add_flag("-q,--quiet", quiet, "suppress progress messages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        const auto selected = parse_experiment(experiment);
        if (!selected) throw decoheat::ValidationError("unknown experiment '" + experiment + "'");

        std::string text;
        if (!config_path.empty()) text = read_file(config_path);
        else if (!replay_path.empty()) text = extract_echoed_config(read_file(replay_path));

        RunConfig config = parse_config(text, selected);
        if (!output.empty()) config.output = output;
        if (threads >= 0) config.threads = static_cast<std::size_t>(threads);

        RunOptions options;
        options.timestamp = !no_timestamp;
        options.log = quiet ? nullptr : &std::cerr;
        return run_experiment(config, options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
