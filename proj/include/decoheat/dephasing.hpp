// dephasing.hpp: exact many-body treatment of finite pure-dephasing problems
//
// A system with levels |n> (energies eps_n) couples to a bath via
//     H_SB = Σ_n g_n |n><n| ⊗ V_n ,
// so the bath evolves under the conditioned Hamiltonian H_n = H_B + g_n V_n while
// the system sits in |n>. Every quantity below is obtained by dense Hermitian
// eigendecomposition of H_B and of each H_n; this is the brute-force reference
// for the functional-determinant engine and is only meant for small baths.

#pragma once

#include "decoheat/atomic_distribution.hpp"
#include "decoheat/linalg.hpp"

#include <optional>
#include <vector>

namespace decoheat::core {

struct Coupling {
    double g{0.0};
    CMatrix V; // Hermitian on the bath space
};

struct DephasingModel {
    std::vector<double> system_energies;     // eps_n, one per level
    std::vector<Coupling> couplings;         // exactly one per level (g = 0 when uncoupled)
    CMatrix bath_hamiltonian;                // H_B
    double beta{1.0};                        // inverse temperature
    std::optional<double> chemical_potential;
    std::optional<CMatrix> number_operator;  // commutes with H_B
    CMatrix initial_system_state;            // rho_S(0)

    Eigen::Index dim_system() const { return static_cast<Eigen::Index>(system_energies.size()); }
    Eigen::Index dim_bath() const { return bath_hamiltonian.rows(); }
};

struct ConditionedHamiltonian {
    Eigen::Index index{0};
    CMatrix op; // H_B + g_n V_n
};

struct OracleOptions {
    double merge_tolerance{AtomicDistribution::kDefaultMergeTolerance};
    Eigen::Index max_bath_dim{4096};
};

// Throws ValidationError / DomainError when the model breaks an invariant.
void validate(const DephasingModel& model);

ConditionedHamiltonian conditioned_hamiltonian(const DephasingModel& model, Eigen::Index n);

// Validated model plus cached eigendecompositions. Immutable after construction,
// so one instance may be shared by concurrent readers.
class ExactDephasing {
public:
    explicit ExactDephasing(DephasingModel model, OracleOptions options = {});

    const DephasingModel& model() const { return model_; }
    const OracleOptions& options() const { return options_; }

    // Bath energies E_j and eigenvectors |E_j>; when a number operator is present
    // the basis diagonalizes it simultaneously.
    const RVector& bath_energies() const { return bath_energies_; }
    const CMatrix& bath_eigenvectors() const { return bath_basis_; }
    // Thermal weights of the bath eigenstates (canonical or grand canonical).
    const RVector& thermal_weights() const { return thermal_weights_; }

    CMatrix thermal_bath_state() const;

    // <exp(i H_n t) exp(-i H_m t)>_B
    cd overlap(Eigen::Index m, Eigen::Index n, double t) const;

    // rho_S^{mn}(t)
    cd reduced_coherence(Eigen::Index m, Eigen::Index n, double t) const;

    // Two-point-measurement work statistics of the cyclic quench H_B -> H_n -> H_B.
    AtomicDistribution conditional_work_distribution(Eigen::Index n, double tf) const;

    // Σ_n p_n P_n(Q)
    AtomicDistribution mixture_heat_distribution(double tf) const;

    // Θ_n(u) for a single branch and the population-weighted mixture Θ(u).
    cd branch_characteristic_function(Eigen::Index n, double tf, cd u) const;
    cd direct_characteristic_function(double tf, cd u) const;

    // Σ_n p_n exp(-i H_n t) rho_B(0) exp(i H_n t)
    CMatrix bath_map_evolve(double t) const;

    // Random static phase model; requires commuting couplings and a nondegenerate H_B.
    cd static_noise_overlap(Eigen::Index m, Eigen::Index n, double t) const;

private:
    void check_level(Eigen::Index n) const;
    void check_time(double t, const char* what) const;
    double population(Eigen::Index n) const;

    DephasingModel model_;
    OracleOptions options_;
    RVector bath_energies_;
    CMatrix bath_basis_;
    RVector thermal_weights_;
    RVector log_thermal_weights_;
    std::vector<HermitianSpectrum<cd>> conditioned_;
};

} // namespace decoheat::core
