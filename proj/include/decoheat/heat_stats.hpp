// heat_stats.hpp: heat moments, densities, fluctuation residuals, entropy production

#pragma once

#include "decoheat/lattice.hpp"
#include "decoheat/linalg.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace decoheat::heat {

// Θ(u) for complex counting field u. Must be safe to call concurrently when
// used with threads > 1.
using CharacteristicFunction = std::function<cd(cd)>;

inline constexpr double kDefaultDeltaU = 1e-4;

// Finite-difference step used when none is given: kDefaultDeltaU for k <= 2,
// larger for k = 3, 4 where h^k round-off would swamp the result.
double default_step(int order);

// <Q^k> = (-i)^k d^kΘ/du^k at u = 0 from second-order central differences with
// one Richardson step. Throws NumericalError if the imaginary residue exceeds 1e-6.
double heat_moment(const CharacteristicFunction& theta, int order,
                   std::optional<double> delta_u = std::nullopt);

struct MeanAndVariance {
    double mean{0.0};
    double variance{0.0};
};

// First two moments sharing one set of Θ evaluations (u = ±h, ±2h).
MeanAndVariance heat_mean_variance(const CharacteristicFunction& theta,
                                   double delta_u = kDefaultDeltaU, std::size_t threads = 1);

struct HeatDensity {
    std::vector<double> q_grid;
    std::vector<double> density;    // regular part, probability per unit energy
    double zero_atom_weight{0.0};   // δ(Q) weight, >= p0
    double sigma{0.0};              // Gaussian kernel width
    double tf{0.0};
    double q_max{0.0};
    double u_max{0.0};
    double delta_u{0.0};
    double symmetry_residual{0.0};  // max |Θ(-u) - conj Θ(u)| over the probe points
    double alias_residual{0.0};     // transform of the density vs Θ1 at off-grid u

    double regular_weight() const;        // trapezoidal ∫ density
    double mean() const;                  // ∫ Q density (the atom sits at Q = 0)
    // Kernel-corrected second moment ∫ Q² density - σ²·regular_weight, minus mean².
    double variance() const;
    double min_density() const;
};

struct InversionOptions {
    double grid_step_factor{0.25}; // Q-grid spacing = factor·sigma
    std::size_t threads{1};
    double normalization_tol{1e-4};
};

// Gaussian-broadened regular heat density of the mixture p0 δ(Q) + p1 P1(Q),
// where `branch` is Θ1. Θ1 is sampled on u_j = j·π/q_max, |u_j| <= 8/sigma.
// Throws NumericalError when weight beyond ±q_max folds back into the window
// or the total weight misses 1 by more than normalization_tol.
HeatDensity invert_to_density(const CharacteristicFunction& branch, double tf, double q_max,
                              double sigma, double p0, const InversionOptions& options = {});

// |Θ(iβ) - 1|
double fluctuation_residual(const CharacteristicFunction& theta, double beta);

struct EntropyLedger {
    double delta_s{0.0};   // S[rho_S(tf)] - S[rho_S(0)], nats
    double heat_flux{0.0}; // β<Q>, nats
    double sigma{0.0};     // delta_s + heat_flux
};

// Von Neumann entropy with 0 ln 0 = 0.
double von_neumann_entropy(const CMatrix& rho);

EntropyLedger entropy_ledger(cd nu, double mean_q, double beta, const CMatrix& rho_s0);

struct TimeWindow {
    double start{500.0};
    double stop{1000.0};
    int points{50};
};

struct LongTimeHeat {
    double mean{0.0};
    double stddev{0.0};
    bool saturated{true}; // false when stddev > 20% of |mean|
    std::vector<double> times;
    std::vector<double> samples;
};

// Window average of <Q>(tf) for the Ramsey mixture p = (1/2, 1/2).
LongTimeHeat long_time_mean_heat(const lattice::LatticeSpec& spec, const TimeWindow& window = {},
                                 double delta_u = kDefaultDeltaU, std::size_t threads = 1);
LongTimeHeat long_time_mean_heat(const lattice::SpectralCache& cache, const TimeWindow& window = {},
                                 double delta_u = kDefaultDeltaU, std::size_t threads = 1);

// Evenly spaced samples including both ends.
std::vector<double> linspace(double start, double stop, int points);

} // namespace decoheat::heat
