#include "decoheat/atomic_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace decoheat {

AtomicDistribution::AtomicDistribution(std::vector<Atom> atoms, double merge_tolerance) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    atoms_.reserve(atoms.size());
    double cluster_start = 0.0;
    for (const Atom& a : atoms) {
        if (!atoms_.empty() && a.value - cluster_start < merge_tolerance) {
            atoms_.back().weight += a.weight;
            continue;
        }
        cluster_start = a.value;
        atoms_.push_back(a);
    }
}

double AtomicDistribution::total_weight() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight;
    return s;
}

double AtomicDistribution::mean() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * a.value;
    return s;
}

double AtomicDistribution::variance() const {
    const double m = mean();
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * (a.value - m) * (a.value - m);
    return s;
}

std::complex<double> AtomicDistribution::characteristic(std::complex<double> u) const {
    std::complex<double> s{0.0, 0.0};
    for (const Atom& a : atoms_) s += a.weight * std::exp(std::complex<double>(0.0, 1.0) * u * a.value);
    return s;
}

double AtomicDistribution::exponential_average(double beta) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * std::exp(-beta * a.value);
    return s;
}

double AtomicDistribution::weight_near(double value, double tol) const {
    double s = 0.0;
    for (const Atom& a : atoms_)
        if (std::abs(a.value - value) < tol) s += a.weight;
    return s;
}

double AtomicDistribution::gaussian_density(double q, double sigma, double skip_zero_tol) const {
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    double s = 0.0;
    for (const Atom& a : atoms_) {
        if (std::abs(a.value) < skip_zero_tol) continue;
        const double x = (q - a.value) / sigma;
        s += a.weight * norm * std::exp(-0.5 * x * x);
    }
    return s;
}

AtomicDistribution AtomicDistribution::mixture(const std::vector<AtomicDistribution>& parts,
                                               const std::vector<double>& weights,
                                               double merge_tolerance) {
    std::vector<Atom> all;
    for (std::size_t i = 0; i < parts.size() && i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        for (const Atom& a : parts[i].atoms()) all.push_back({a.value, weights[i] * a.weight});
    }
    return AtomicDistribution(std::move(all), merge_tolerance);
}

} // namespace decoheat
