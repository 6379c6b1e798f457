// fda.hpp: functional-determinant evaluation of decoherence and heat statistics
//
// Thermal averages of products of exponentials of quadratic fermionic operators
// reduce to L×L determinants,
//   <e^{Y1} ... e^{Yk}> = det[1 - n + n e^{y1} ... e^{yk}],
// with n the single-particle Fermi-Dirac occupation operator. All matrices are
// assembled in the h0 eigenbasis, where n and exp(i u h0) are diagonal and
// exp(i t h1) = Φ diag(exp(i t ε1)) Φᵀ with Φ = SpectralCache::overlap().

#pragma once

#include "decoheat/lattice.hpp"
#include "decoheat/linalg.hpp"

#include <array>
#include <span>
#include <vector>

namespace decoheat::fda {

// ν(t) = det[1 - n + n e^{i h0 t} e^{-i h1 t}] in log form.
LogComplex log_decoherence_function(const lattice::SpectralCache& cache, double t);
cd decoherence_function(const lattice::SpectralCache& cache, double t);

// Θ1(u) at a fixed protocol time. Holds exp(i tf h1) in the h0 eigenbasis so
// that repeated counting-field evaluations cost one product and one LU each.
// Keeps a reference to `cache`, which must outlive it. Thread-safe for
// concurrent const calls.
class BranchCharacteristic {
public:
    BranchCharacteristic(const lattice::SpectralCache& cache, double tf);

    double tf() const { return tf_; }
    LogComplex log_value(cd u) const;
    cd operator()(cd u) const { return log_value(u).value(); }

    // p1-free mean work Σ_k f_k ([A ε0 A†]_kk - ε0_k), the single-particle
    // trace identity for dΘ1/du at u = 0.
    double mean_work_trace() const;

private:
    LogComplex direct(cd u) const;
    LogComplex rescaled(cd u) const;

    const lattice::SpectralCache* cache_;
    double tf_;
    CMatrix forward_; // exp(i tf h1) in the h0 eigenbasis (complex symmetric)
};

cd heat_characteristic_branch(const lattice::SpectralCache& cache, double tf, cd u);

// p0 + p1 Θ1(u); the uncoupled branch contributes exactly 1.
cd full_characteristic_function(const lattice::SpectralCache& cache, std::array<double, 2> p,
                                double tf, cd u);
void check_branch_probabilities(std::array<double, 2> p);

// Sampled complex function with log-magnitudes kept alongside the values.
struct ComplexSeries {
    std::vector<double> grid;
    std::vector<cd> values;
    std::vector<double> log_magnitudes;
    std::vector<double> phases;
    std::vector<bool> phase_reliable;

    void push_back(double x, const LogComplex& z);
};

ComplexSeries decoherence_series(const lattice::SpectralCache& cache, std::span<const double> times,
                                 std::size_t threads = 1);
ComplexSeries characteristic_series(const BranchCharacteristic& branch, std::span<const double> u_grid,
                                    std::size_t threads = 1);

} // namespace decoheat::fda
