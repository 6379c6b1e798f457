#include "decoheat/heat_stats.hpp"

#include "decoheat/errors.hpp"
#include "decoheat/fda.hpp"
#include "decoheat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace decoheat::heat {

namespace {

constexpr double kResidueError = 1e-6;

cd minus_i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

// Second-order central difference for the k-th derivative with step h, given a
// lookup of Θ at integer multiples of h.
template <typename Lookup>
cd central_difference(int k, double h, Lookup&& at) {
    switch (k) {
    case 1: return (at(1) - at(-1)) / (2.0 * h);
    case 2: return (at(1) - 2.0 * at(0) + at(-1)) / (h * h);
    case 3: return (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h * h * h);
    case 4: return (at(2) - 4.0 * at(1) + 6.0 * at(0) - 4.0 * at(-1) + at(-2)) / (h * h * h * h);
    default: throw DomainError("heat_moment: order must be in {1, 2, 3, 4}");
    }
}

int stencil_reach(int k) { return k <= 2 ? 1 : 2; }

// Evaluates Θ at every multiple j·h needed for orders `orders` with steps h and 2h.
std::map<int, cd> sample_stencil(const CharacteristicFunction& theta, std::span<const int> orders,
                                 double h, std::size_t threads) {
    int reach = 0;
    for (int k : orders) reach = std::max(reach, 2 * stencil_reach(k));
    std::vector<int> multiples;
    for (int j = -reach; j <= reach; ++j) multiples.push_back(j);
    const auto values = parallel_map(multiples.size(), threads, [&](std::size_t i) {
        const int j = multiples[i];
        return j == 0 ? theta(cd{0.0, 0.0}) : theta(cd{j * h, 0.0});
    });
    std::map<int, cd> out;
    for (std::size_t i = 0; i < multiples.size(); ++i) out[multiples[i]] = values[i];
    return out;
}

double moment_from_samples(const std::map<int, cd>& samples, int k, double h) {
    const cd fine = central_difference(k, h, [&](int j) { return samples.at(j); });
    const cd coarse = central_difference(k, 2.0 * h, [&](int j) { return samples.at(2 * j); });
    const cd richardson = (4.0 * fine - coarse) / 3.0;
    const cd moment = minus_i_pow(k) * richardson;
    if (std::abs(moment.imag()) > kResidueError * std::max(1.0, std::abs(moment.real()))) {
        std::ostringstream os;
        os << "heat_moment: imaginary residue " << moment.imag() << " for order " << k
           << " exceeds " << kResidueError;
        throw NumericalError(os.str());
    }
    return moment.real();
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

// Kaiser window on [-1, 1]; sidelobes fall off like exp(-beta).
double kaiser(double x, double beta) {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) / std::cyl_bessel_i(0.0, beta);
}

constexpr double kElasticBeta = 16.0;

} // namespace

double default_step(int order) {
    switch (order) {
    case 1:
    case 2: return kDefaultDeltaU;
    case 3: return 5e-3;
    case 4: return 1e-2;
    default: throw DomainError("heat_moment: order must be in {1, 2, 3, 4}");
    }
}

double heat_moment(const CharacteristicFunction& theta, int order, std::optional<double> delta_u) {
    if (order < 1 || order > 4) throw DomainError("heat_moment: order must be in {1, 2, 3, 4}");
    const double h = delta_u.value_or(default_step(order));
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("heat_moment: delta_u must be positive");
    const int orders[] = {order};
    const auto samples = sample_stencil(theta, orders, h, 1);
    return moment_from_samples(samples, order, h);
}

MeanAndVariance heat_mean_variance(const CharacteristicFunction& theta, double delta_u,
                                   std::size_t threads) {
    if (!(delta_u > 0) || !std::isfinite(delta_u))
        throw DomainError("heat_mean_variance: delta_u must be positive");
    const int orders[] = {1, 2};
    const auto samples = sample_stencil(theta, orders, delta_u, threads);
    const double m1 = moment_from_samples(samples, 1, delta_u);
    const double m2 = moment_from_samples(samples, 2, delta_u);
    return {m1, m2 - m1 * m1};
}

double HeatDensity::regular_weight() const { return trapezoid(q_grid, density); }

double HeatDensity::mean() const {
    std::vector<double> y(q_grid.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = q_grid[i] * density[i];
    return trapezoid(q_grid, y);
}

double HeatDensity::variance() const {
    std::vector<double> y(q_grid.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = q_grid[i] * q_grid[i] * density[i];
    const double second = trapezoid(q_grid, y) - sigma * sigma * regular_weight();
    const double m = mean();
    return second - m * m;
}

double HeatDensity::min_density() const {
    return density.empty() ? 0.0 : *std::min_element(density.begin(), density.end());
}

HeatDensity invert_to_density(const CharacteristicFunction& branch, double tf, double q_max,
                              double sigma, double p0, const InversionOptions& options) {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("invert_to_density: sigma must be positive");
    if (!(q_max > 0) || !std::isfinite(q_max)) throw DomainError("invert_to_density: q_max must be positive");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("invert_to_density: p0 must lie in [0, 1]");
    const double p1 = 1.0 - p0;

    HeatDensity out;
    out.sigma = sigma;
    out.tf = tf;
    out.q_max = q_max;
    out.u_max = 8.0 / sigma;
    out.delta_u = std::numbers::pi / q_max;
    const auto count = static_cast<std::size_t>(std::floor(out.u_max / out.delta_u)) + 1;

    const auto theta = parallel_map(count, options.threads, [&](std::size_t j) {
        return j == 0 ? branch(cd{0.0, 0.0}) : branch(cd{static_cast<double>(j) * out.delta_u, 0.0});
    });

    // Hermiticity of Θ (P1 is real) is probed at a handful of negative u; the
    // inversion then uses Θ(-u) = conj Θ(u).
    constexpr std::size_t kProbes = 8;
    std::vector<std::size_t> probe;
    for (std::size_t p = 1; p <= kProbes && count > 1; ++p) probe.push_back(p * (count - 1) / kProbes);
    const auto mirrored = parallel_map(probe.size(), options.threads, [&](std::size_t i) {
        return branch(cd{-static_cast<double>(probe[i]) * out.delta_u, 0.0});
    });
    for (std::size_t i = 0; i < probe.size(); ++i)
        out.symmetry_residual = std::max(out.symmetry_residual, std::abs(mirrored[i] - std::conj(theta[probe[i]])));

    // Elastic weight: Kaiser-weighted mean of Θ1 over [0, U], centred on U/2.
    double window_sum = 0.0;
    cd weighted{0.0, 0.0};
    for (std::size_t j = 0; j < count; ++j) {
        const double u = static_cast<double>(j) * out.delta_u;
        const double b = kaiser(2.0 * u / out.u_max - 1.0, kElasticBeta);
        window_sum += b;
        weighted += b * theta[j];
    }
    const double elastic = window_sum > 0 ? std::clamp(weighted.real() / window_sum, 0.0, 1.0) : 0.0;
    out.zero_atom_weight = p0 + p1 * elastic;

    std::vector<cd> windowed(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double u = static_cast<double>(j) * out.delta_u;
        windowed[j] = std::exp(-0.5 * u * u * sigma * sigma) * (theta[j] - elastic);
    }

    const double dq = options.grid_step_factor * sigma;
    const auto points = static_cast<std::size_t>(std::floor(2.0 * q_max / dq)) + 1;
    out.q_grid.resize(points);
    for (std::size_t i = 0; i < points; ++i) out.q_grid[i] = -q_max + static_cast<double>(i) * dq;
    out.density = parallel_map(points, options.threads, [&](std::size_t i) {
        const double q = out.q_grid[i];
        double s = windowed[0].real();
        for (std::size_t j = 1; j < count; ++j) {
            const double u = static_cast<double>(j) * out.delta_u;
            s += 2.0 * (std::exp(cd{0.0, -u * q}) * windowed[j]).real();
        }
        return p1 * out.delta_u / (2.0 * std::numbers::pi) * s;
    });

    // Off-grid probes: the transform of the density reproduces the windowed Θ1
    // only when no weight lies beyond ±q_max.
    for (std::size_t p = 0; p < kProbes; ++p) {
        const double u = (static_cast<double>(p) + 0.5) * out.delta_u;
        if (u > out.u_max) break;
        const cd expected = p1 * std::exp(-0.5 * u * u * sigma * sigma) * (branch(cd{u, 0.0}) - elastic);
        std::vector<double> re(points), im(points);
        for (std::size_t i = 0; i < points; ++i) {
            const cd w = out.density[i] * std::exp(cd{0.0, u * out.q_grid[i]});
            re[i] = w.real();
            im[i] = w.imag();
        }
        const cd got{trapezoid(out.q_grid, re), trapezoid(out.q_grid, im)};
        out.alias_residual = std::max(out.alias_residual, std::abs(got - expected));
    }
    if (out.alias_residual > options.normalization_tol) {
        std::ostringstream os;
        os << "invert_to_density: off-grid transform residual " << out.alias_residual
           << " exceeds " << options.normalization_tol << "; weight beyond q_max, increase q_max";
        throw NumericalError(os.str());
    }

    const double total = out.zero_atom_weight + out.regular_weight();
    if (std::abs(total - 1.0) > options.normalization_tol) {
        std::ostringstream os;
        os << "invert_to_density: total weight " << total << " deviates from 1 by more than "
           << options.normalization_tol << "; increase q_max or decrease sigma";
        throw NumericalError(os.str());
    }
    return out;
}

double fluctuation_residual(const CharacteristicFunction& theta, double beta) {
    if (!(beta > 0) || !std::isfinite(beta))
        throw DomainError("fluctuation_residual: beta must be finite and positive");
    return std::abs(theta(cd{0.0, beta}) - 1.0);
}

double von_neumann_entropy(const CMatrix& rho) {
    const HermitianSpectrum<cd> es(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        const double p = std::clamp(es.values(k), 0.0, 1.0);
        if (p > 0) s -= p * std::log(p);
    }
    return s;
}

EntropyLedger entropy_ledger(cd nu, double mean_q, double beta, const CMatrix& rho_s0) {
    if (std::abs(nu) > 1.0 + 1e-6) throw DomainError("entropy_ledger: |nu| exceeds 1");
    if (!(beta >= 0) || !std::isfinite(beta)) throw DomainError("entropy_ledger: beta must be finite and >= 0");
    if (rho_s0.rows() != 2 || rho_s0.cols() != 2) throw ValidationError("entropy_ledger: expected a qubit state");
    if (!is_hermitian(rho_s0, 1e-12) || std::abs(rho_s0.trace() - 1.0) > 1e-12)
        throw ValidationError("entropy_ledger: invalid qubit density operator");

    CMatrix rho_t = rho_s0;
    const double damp = std::min(std::abs(nu), 1.0);
    rho_t(1, 0) *= damp;
    rho_t(0, 1) *= damp;

    EntropyLedger out;
    out.delta_s = von_neumann_entropy(rho_t) - von_neumann_entropy(rho_s0);
    out.heat_flux = beta * mean_q;
    out.sigma = out.delta_s + out.heat_flux;
    return out;
}

std::vector<double> linspace(double start, double stop, int points) {
    if (points < 2) return {start};
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (points - 1);
    return out;
}

LongTimeHeat long_time_mean_heat(const lattice::SpectralCache& cache, const TimeWindow& window,
                                 double delta_u, std::size_t threads) {
    if (!(window.start >= 0) || !(window.stop > window.start) || window.points < 2)
        throw DomainError("long_time_mean_heat: window needs 0 <= start < stop and >= 2 points");
    LongTimeHeat out;
    out.times = linspace(window.start, window.stop, window.points);
    out.samples = parallel_map(out.times.size(), threads, [&](std::size_t i) {
        const fda::BranchCharacteristic branch(cache, out.times[i]);
        const CharacteristicFunction theta = [&](cd u) { return 0.5 + 0.5 * branch(u); };
        return heat_moment(theta, 1, delta_u);
    });
    double s = 0.0;
    for (double x : out.samples) s += x;
    out.mean = s / static_cast<double>(out.samples.size());
    double v = 0.0;
    for (double x : out.samples) v += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(v / static_cast<double>(out.samples.size()));
    out.saturated = out.stddev <= 0.2 * std::abs(out.mean);
    return out;
}

LongTimeHeat long_time_mean_heat(const lattice::LatticeSpec& spec, const TimeWindow& window,
                                 double delta_u, std::size_t threads) {
    const lattice::SpectralCache cache(spec);
    return long_time_mean_heat(cache, window, delta_u, threads);
}

} // namespace decoheat::heat
