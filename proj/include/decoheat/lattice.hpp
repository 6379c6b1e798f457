// lattice.hpp: tight-binding ring with a qubit-controlled impurity site
//
// Single-particle Hamiltonians (Ω = hopping):
//   h0 = -Ω/2 Σ_j (|j><j+1| + |j+1><j|),   periodic, L >= 3
//   h1 = h0 + g |s><s|                     (s = impurity site, 1-based)
// Energies everywhere are in units of the hopping.

#pragma once

#include "decoheat/dephasing.hpp"
#include "decoheat/errors.hpp"
#include "decoheat/linalg.hpp"

#include <limits>
#include <optional>
#include <string>

namespace decoheat::lattice {

struct LatticeSpec {
    int sites{500};                    // L
    double hopping{1.0};               // Ω
    double coupling{0.0};              // g
    double temperature{0.0};           // T, k_B = 1
    std::optional<int> particles;      // N, defaults to L/2
    double qubit_splitting{0.0};       // ε
    int impurity_site{1};

    int target_number() const { return particles.value_or(sites / 2); }
    double beta() const {
        return temperature > 0 ? 1.0 / temperature : std::numeric_limits<double>::infinity();
    }
};

// Throws DomainError / ValidationError on an invalid spec.
void validate(const LatticeSpec& spec);

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ring_hamiltonian(int sites, Scalar hopping) {
    if (sites < 3)
        throw DomainError("ring_hamiltonian: L = " + std::to_string(sites) +
                          " < 3; a two-site ring counts its single bond twice");
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat h = Mat::Zero(sites, sites);
    const Scalar t = -hopping / Scalar(2);
    for (int j = 0; j < sites; ++j) {
        const int k = (j + 1) % sites;
        h(j, k) = t;
        h(k, j) = t;
    }
    return h;
}

// h0 + g at diagonal entry `site` (1-based).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
with_impurity(const Eigen::MatrixBase<Derived>& h0, typename Derived::Scalar g, int site) {
    if (site < 1 || site > h0.rows())
        throw IndexError("with_impurity: site " + std::to_string(site) + " outside [1, " +
                         std::to_string(h0.rows()) + "]");
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> h1 = h0;
    h1(site - 1, site - 1) += g;
    return h1;
}

// Chemical potential giving Σ f(ε_k) = N. For T = 0 this is the midpoint of the
// N-th and (N+1)-th levels.
double solve_chemical_potential(const RVector& eigenvalues, double temperature, int particles);

// Fermi-Dirac occupations; at T = 0 levels within 1e-12·scale of mu get 1/2.
RVector fermi_occupations(const RVector& eigenvalues, double temperature, double mu);

// n̂ = Σ_k f(ε_k) |φ_k><φ_k| in the site basis.
RMatrix occupation_operator(const RVector& eigenvalues, const RMatrix& eigenvectors,
                            double temperature, double mu);

// Immutable spectral data shared by every determinant evaluation.
class SpectralCache {
public:
    explicit SpectralCache(const LatticeSpec& spec);

    const LatticeSpec& spec() const { return spec_; }
    Eigen::Index sites() const { return h0_.values.size(); }

    const RVector& h0_eigenvalues() const { return h0_.values; }
    const RMatrix& h0_eigenvectors() const { return h0_.vectors; }
    const RVector& h1_eigenvalues() const { return h1_.values; }
    const RMatrix& h1_eigenvectors() const { return h1_.vectors; }

    double mu() const { return mu_; }
    double temperature() const { return spec_.temperature; }
    double beta() const { return spec_.beta(); }
    // f(ε_k) for the h0 eigenmodes.
    const RVector& occupations() const { return occupations_; }
    // Φ0ᵀ Φ1: h1 eigenvectors expressed in the h0 eigenbasis.
    const RMatrix& overlap() const { return overlap_; }

    RMatrix occupation_operator() const;

private:
    LatticeSpec spec_;
    HermitianSpectrum<double> h0_;
    HermitianSpectrum<double> h1_;
    double mu_{0.0};
    RVector occupations_;
    RMatrix overlap_;
};

enum class Ensemble { GrandCanonical, Canonical };

// Qubit + lattice as a generic dephasing model on the many-body Fock space
// (2^L states for the grand-canonical ensemble, the fixed-N sector otherwise).
// Level 0 is uncoupled, level 1 couples with g to the impurity occupation.
core::DephasingModel many_body_model(const LatticeSpec& spec, const CMatrix& initial_qubit_state,
                                     Ensemble ensemble = Ensemble::GrandCanonical);

// |+><+| on the qubit.
CMatrix plus_state();

} // namespace decoheat::lattice
