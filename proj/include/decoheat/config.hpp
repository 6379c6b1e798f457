// config.hpp: run configuration: line-oriented key=value documents
//
//   # comment
//   experiment=decoherence
//   lattice.L=500
//   sweeps.g=0.1,0.5,1
//
// Unknown and duplicate keys are errors. Keys left out take experiment-specific
// defaults; the resolved configuration is echoed into every CSV header.

#pragma once

#include "decoheat/heat_stats.hpp"
#include "decoheat/lattice.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace decoheat::cli {

enum class Experiment { Decoherence, HeatVsTime, HeatDistribution, HeatVsTemperature, Validate };
enum class TimeScale { Log, Linear };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct TimeGrid {
    TimeScale scale{TimeScale::Log};
    double start{0.1};
    double stop{1000.0};
    int points{200};

    std::vector<double> values() const;
};

struct CountingGrid {
    double q_max{4.0};
    double sigma{0.01};
    double tf{50.0}; // protocol time of the heat-distribution experiment
};

struct RunConfig {
    Experiment experiment{Experiment::Decoherence};
    lattice::LatticeSpec lattice;
    std::vector<double> couplings;
    std::vector<double> temperatures;
    TimeGrid time;
    CountingGrid counting;
    heat::TimeWindow window;
    double delta_u{heat::kDefaultDeltaU};
    std::string output;
    std::size_t threads{0};

    // Canonical key=value pairs; parsing them back reproduces this config.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// `experiment_override` (e.g. from the command line) fills in or must agree with
// an `experiment=` entry. Throws ValidationError listing every problem found.
RunConfig parse_config(std::string_view text, std::optional<Experiment> experiment_override = std::nullopt);

// The `# config: key=value` lines of a CSV written by the runner, as a config document.
std::string extract_echoed_config(std::string_view csv_text);

// Shortest round-trip decimal representation.
std::string format_double(double x);

} // namespace decoheat::cli
