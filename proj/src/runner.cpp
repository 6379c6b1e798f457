#include "decoheat/runner.hpp"

#include "decoheat/dephasing.hpp"
#include "decoheat/errors.hpp"
#include "decoheat/fda.hpp"
#include "decoheat/heat_stats.hpp"
#include "decoheat/lattice.hpp"
#include "decoheat/parallel.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef DECOHEAT_VERSION
#define DECOHEAT_VERSION "dev"
#endif

namespace decoheat::cli {

namespace {

constexpr double kOracleTol = 1e-10;
constexpr double kJarzynskiTol = 1e-9;
constexpr double kFluctuationTol = 1e-8;
constexpr int kMaxOracleSites = 8;
constexpr double kValidationTf = 2.0;
constexpr double kValidationU[] = {-1.7, -0.4, 0.6, 1.3, 2.9};
constexpr double kFluctuationTimes[] = {1.0, 10.0, 100.0};

class Row {
public:
    Row& operator<<(double x) { return add(format_double(x)); }
    Row& operator<<(int x) { return add(std::to_string(x)); }
    Row& operator<<(const std::string& s) { return add(s); }
    std::string str() const { return line_ + "\n"; }

private:
    Row& add(const std::string& s) {
        if (!line_.empty()) line_ += ',';
        line_ += s;
        return *this;
    }
    std::string line_;
};

void log_line(const RunOptions& o, const std::string& msg) {
    if (o.log) *o.log << msg << '\n';
}

lattice::LatticeSpec spec_for(const RunConfig& c, double g, double T) {
    lattice::LatticeSpec s = c.lattice;
    s.coupling = g;
    s.temperature = T;
    return s;
}

void write_header(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    out << "# decoheat " << DECOHEAT_VERSION << '\n';
    if (o.timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# timestamp=" << buf << '\n';
    }
    out << "# units: energies in units of the hopping Omega, times in units of 1/Omega\n";
    for (const auto& [k, v] : c.echo()) out << "# config: " << k << '=' << v << '\n';
}

void write_decoherence(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    const auto times = c.time.values();
    out << "# grid: " << times.size() << " times, " << (c.time.scale == TimeScale::Log ? "log" : "linear")
        << " spacing\n";
    out << "t,g,T,abs_nu,arg_nu,log_abs_nu\n";
    for (double g : c.couplings) {
        for (double T : c.temperatures) {
            log_line(o, "decoherence: g=" + format_double(g) + " T=" + format_double(T));
            const lattice::SpectralCache cache(spec_for(c, g, T));
            const auto series = fda::decoherence_series(cache, times, c.threads);
            for (std::size_t i = 0; i < times.size(); ++i) {
                Row r;
                r << times[i] << g << T << std::exp(series.log_magnitudes[i]) << series.phases[i]
                  << series.log_magnitudes[i];
                out << r.str();
            }
        }
    }
}

void write_heat_vs_time(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    const auto times = c.time.values();
    out << "# grid: " << times.size() << " protocol times; moments by central differences, delta_u="
        << format_double(c.delta_u) << "; p=(1/2,1/2)\n";
    out << "tf,g,T,mean_Q,var_Q\n";
    for (double g : c.couplings) {
        for (double T : c.temperatures) {
            log_line(o, "heat-vs-time: g=" + format_double(g) + " T=" + format_double(T));
            const lattice::SpectralCache cache(spec_for(c, g, T));
            const auto moments = parallel_map(times.size(), c.threads, [&](std::size_t i) {
                const fda::BranchCharacteristic branch(cache, times[i]);
                return heat::heat_mean_variance([&](cd u) { return 0.5 + 0.5 * branch(u); }, c.delta_u);
            });
            for (std::size_t i = 0; i < times.size(); ++i) {
                Row r;
                r << times[i] << g << T << moments[i].mean << moments[i].variance;
                out << r.str();
            }
        }
    }
}

void write_heat_distribution(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    struct Block {
        double g, T;
        heat::HeatDensity density;
    };
    std::vector<Block> blocks;
    for (double g : c.couplings) {
        for (double T : c.temperatures) {
            log_line(o, "heat-distribution: g=" + format_double(g) + " T=" + format_double(T));
            const lattice::SpectralCache cache(spec_for(c, g, T));
            const fda::BranchCharacteristic branch(cache, c.counting.tf);
            heat::InversionOptions opts;
            opts.threads = c.threads;
            blocks.push_back({g, T,
                              heat::invert_to_density([&](cd u) { return branch(u); }, c.counting.tf,
                                                      c.counting.q_max, c.counting.sigma, 0.5, opts)});
        }
    }
    out << "# broadening: gaussian sigma=" << format_double(c.counting.sigma)
        << ", q_max=" << format_double(c.counting.q_max) << ", p=(1/2,1/2)\n";
    for (const auto& b : blocks) {
        out << "# inversion: g=" << format_double(b.g) << " T=" << format_double(b.T)
            << " u_max=" << format_double(b.density.u_max) << " delta_u=" << format_double(b.density.delta_u)
            << " zero_atom_weight=" << format_double(b.density.zero_atom_weight)
            << " symmetry_residual=" << format_double(b.density.symmetry_residual)
            << " alias_residual=" << format_double(b.density.alias_residual) << '\n';
    }
    out << "Q,g,T,tf,density,zero_atom_weight,sigma\n";
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.density.q_grid.size(); ++i) {
            Row r;
            r << b.density.q_grid[i] << b.g << b.T << c.counting.tf << b.density.density[i]
              << b.density.zero_atom_weight << b.density.sigma;
            out << r.str();
        }
    }
}

void write_heat_vs_temperature(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    struct Point {
        double T, g;
        heat::LongTimeHeat heat;
    };
    std::vector<Point> points;
    for (double g : c.couplings) {
        for (double T : c.temperatures) {
            log_line(o, "heat-vs-temperature: g=" + format_double(g) + " T=" + format_double(T));
            const lattice::SpectralCache cache(spec_for(c, g, T));
            points.push_back({T, g, heat::long_time_mean_heat(cache, c.window, c.delta_u, c.threads)});
        }
    }
    out << "# window: tf in [" << format_double(c.window.start) << ", " << format_double(c.window.stop)
        << "], " << c.window.points << " samples\n";
    for (const auto& p : points)
        if (!p.heat.saturated)
            out << "# warning: not saturated at g=" << format_double(p.g) << " T=" << format_double(p.T)
                << " (stddev exceeds 20% of the mean)\n";
    out << "T,g,mean_Q_longtime,stddev_over_window\n";
    for (const auto& p : points) {
        Row r;
        r << p.T << p.g << p.heat.mean << p.heat.stddev;
        out << r.str();
    }
}

int write_validate(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    log_line(o, "validate: running oracle and fluctuation-relation suite");
    const auto checks = run_validation_suite(c);
    out << "check,L,g,T,value,tolerance,pass\n";
    bool ok = true;
    for (const auto& ch : checks) {
        Row r;
        r << ch.name << ch.sites << ch.g << ch.temperature << ch.value << ch.tolerance
          << std::string(ch.pass ? "true" : "false");
        out << r.str();
        ok = ok && ch.pass;
    }
    return ok ? kExitOk : kExitNumerical;
}

} // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const CapacityError*>(&e))
        return kExitNumerical;
    if (dynamic_cast<const Error*>(&e)) return kExitValidation;
    return kExitNumerical;
}

std::vector<ValidationCheck> run_validation_suite(const RunConfig& c) {
    std::vector<int> oracle_sites;
    if (c.lattice.sites <= kMaxOracleSites) oracle_sites = {c.lattice.sites};
    else oracle_sites = {4, 5, 6};
    const auto times = c.time.values();

    std::vector<ValidationCheck> out;
    auto record = [&](std::string name, int L, double g, double T, double value, double tol) {
        out.push_back({std::move(name), L, g, T, value, tol, value < tol});
    };

    for (int L : oracle_sites) {
        for (double g : c.couplings) {
            for (double T : c.temperatures) {
                if (T <= 0) continue;
                lattice::LatticeSpec spec = spec_for(c, g, T);
                spec.sites = L;
                if (L != c.lattice.sites) spec.particles.reset();
                spec.impurity_site = std::min(spec.impurity_site, L);
                const lattice::SpectralCache cache(spec);
                const core::ExactDephasing oracle(
                    lattice::many_body_model(spec, lattice::plus_state(), lattice::Ensemble::GrandCanonical));

                double nu_err = 0.0;
                for (double t : times)
                    nu_err = std::max(nu_err, std::abs(fda::decoherence_function(cache, t) - oracle.overlap(1, 0, t)));
                record("nu_oracle", L, g, T, nu_err, kOracleTol);

                const fda::BranchCharacteristic branch(cache, kValidationTf);
                double theta_err = 0.0;
                for (double u : kValidationU)
                    theta_err = std::max(theta_err, std::abs(branch(cd{u, 0.0}) -
                                                             oracle.branch_characteristic_function(1, kValidationTf, u)));
                record("theta_oracle", L, g, T, theta_err, kOracleTol);

                const double beta = 1.0 / T;
                record("fluctuation_oracle", L, g, T,
                       std::abs(oracle.direct_characteristic_function(kValidationTf, cd{0.0, beta}) - 1.0),
                       kOracleTol);

                double jarzynski = 0.0;
                for (Eigen::Index n = 0; n < 2; ++n)
                    jarzynski = std::max(jarzynski,
                                         std::abs(oracle.conditional_work_distribution(n, kValidationTf)
                                                      .exponential_average(beta) - 1.0));
                record("jarzynski_branch", L, g, T, jarzynski, kJarzynskiTol);
            }
        }
    }

    for (double g : c.couplings) {
        for (double T : c.temperatures) {
            if (T <= 0) continue;
            const lattice::SpectralCache cache(spec_for(c, g, T));
            double worst = 0.0;
            for (double tf : kFluctuationTimes) {
                const fda::BranchCharacteristic branch(cache, tf);
                worst = std::max(worst, heat::fluctuation_residual(
                                            [&](cd u) { return 0.5 + 0.5 * branch(u); }, 1.0 / T));
            }
            record("fluctuation_fda", c.lattice.sites, g, T, worst, kFluctuationTol);
        }
    }
    return out;
}

int write_experiment(const RunConfig& c, std::ostream& out, const RunOptions& o) {
    write_header(c, out, o);
    switch (c.experiment) {
    case Experiment::Decoherence: write_decoherence(c, out, o); return kExitOk;
    case Experiment::HeatVsTime: write_heat_vs_time(c, out, o); return kExitOk;
    case Experiment::HeatDistribution: write_heat_distribution(c, out, o); return kExitOk;
    case Experiment::HeatVsTemperature: write_heat_vs_temperature(c, out, o); return kExitOk;
    case Experiment::Validate: return write_validate(c, out, o);
    }
    return kExitValidation;
}

int run_experiment(const RunConfig& c, const RunOptions& o) {
    try {
        std::ofstream file(c.output, std::ios::out | std::ios::trunc);
        if (!file) throw IoError("cannot open output file '" + c.output + "'");
        std::ostringstream buffer;
        const int status = write_experiment(c, buffer, o);
        file << buffer.str();
        file.flush();
        if (!file) throw IoError("failed writing '" + c.output + "'");
        if (status != kExitOk) log_line(o, "validation checks failed; see " + c.output);
        return status;
    } catch (const std::exception& e) {
        log_line(o, std::string("error: ") + e.what());
        return exit_code_for(e);
    }
}

} // namespace decoheat::cli
