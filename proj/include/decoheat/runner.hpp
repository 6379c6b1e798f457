// runner.hpp: experiment orchestration and CSV export

#pragma once

#include "decoheat/config.hpp"

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace decoheat::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNumerical = 2,
    kExitIo = 3,
};

// Maps a caught exception onto the documented exit codes.
int exit_code_for(const std::exception& e);

struct RunOptions {
    bool timestamp{true};
    std::ostream* log{nullptr}; // progress and error messages
};

struct ValidationCheck {
    std::string name;
    int sites{0};
    double g{0.0};
    double temperature{0.0};
    double value{0.0};
    double tolerance{0.0};
    bool pass{false};
};

// Oracle equivalence, fluctuation relations and per-branch Jarzynski checks.
// Oracle checks run at lattice.L when L <= 8, otherwise at L = 4, 5, 6; the
// determinant-only fluctuation check always runs at lattice.L.
std::vector<ValidationCheck> run_validation_suite(const RunConfig& config);

// Writes the experiment's CSV to `out` and returns an exit code (kExitNumerical
// when a validation check fails). Library errors propagate as exceptions.
int write_experiment(const RunConfig& config, std::ostream& out, const RunOptions& options = {});

// Runs the experiment into config.output. Never throws for library errors;
// they are reported on options.log and mapped to exit codes.
int run_experiment(const RunConfig& config, const RunOptions& options = {});

} // namespace decoheat::cli
