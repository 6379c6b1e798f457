// atomic_distribution.hpp: discrete probability distributions of energy transfers

#pragma once

#include <complex>
#include <vector>

namespace decoheat {

struct Atom {
    double value{0.0};  // energy
    double weight{0.0}; // probability
};

class AtomicDistribution {
public:
    static constexpr double kDefaultMergeTolerance = 1e-9;

    AtomicDistribution() = default;

    // Sorts by value and merges atoms closer than merge_tolerance to the first
    // atom of their cluster (weights added, cluster keeps its first value).
    explicit AtomicDistribution(std::vector<Atom> atoms,
                                double merge_tolerance = kDefaultMergeTolerance);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    double total_weight() const;
    double mean() const;
    double variance() const;

    // Σ weight·exp(i u value); complex u gives the analytic continuation.
    std::complex<double> characteristic(std::complex<double> u) const;

    // Σ weight·exp(-beta value) (Jarzynski average).
    double exponential_average(double beta) const;

    // Weight of atoms with |value| < tol.
    double weight_near(double value, double tol) const;

    // Σ weight·gaussian(q - value; sigma), optionally skipping atoms with |value| < skip_tol.
    double gaussian_density(double q, double sigma, double skip_zero_tol = -1.0) const;

    // Combine distributions with mixture weights; result is merged again.
    static AtomicDistribution mixture(const std::vector<AtomicDistribution>& parts,
                                      const std::vector<double>& weights,
                                      double merge_tolerance = kDefaultMergeTolerance);

private:
    std::vector<Atom> atoms_;
};

} // namespace decoheat
