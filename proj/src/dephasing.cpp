#include "decoheat/dephasing.hpp"

#include "decoheat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace decoheat::core {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kStateTol = 1e-12;
constexpr double kCommuteTol = 1e-12;
constexpr double kDegeneracyGap = 1e-10;
constexpr double kNumberGroupTol = 1e-8;
constexpr double kRoundoffTransition = 1e-24; // |<j|U|k>|^2 below this is rounding noise

std::string level_str(Eigen::Index n) { return std::to_string(n); }

// Eigenbasis of H_B that also diagonalizes N (when given): diagonalize N, then
// H_B inside each eigenspace of N.
void joint_eigenbasis(const CMatrix& hb, const std::optional<CMatrix>& number, RVector& energies,
                      RVector& numbers, CMatrix& basis) {
    const Eigen::Index D = hb.rows();
    if (!number) {
        HermitianSpectrum<cd> es(hb);
        energies = es.values;
        basis = es.vectors;
        numbers = RVector::Zero(D);
        return;
    }
    HermitianSpectrum<cd> ns(*number);
    basis.resize(D, D);
    energies.resize(D);
    numbers.resize(D);
    Eigen::Index start = 0;
    while (start < D) {
        Eigen::Index stop = start + 1;
        while (stop < D && ns.values(stop) - ns.values(start) < kNumberGroupTol) ++stop;
        const Eigen::Index width = stop - start;
        const CMatrix block = ns.vectors.middleCols(start, width);
        const CMatrix projected = block.adjoint() * hb * block;
        HermitianSpectrum<cd> hs(projected);
        basis.middleCols(start, width) = block * hs.vectors;
        energies.segment(start, width) = hs.values;
        numbers.segment(start, width).setConstant(ns.values.segment(start, width).mean());
        start = stop;
    }
}

} // namespace

void validate(const DephasingModel& model) {
    const Eigen::Index dim_s = model.dim_system();
    if (dim_s < 1) throw ValidationError("model: system dimension must be positive");
    if (static_cast<Eigen::Index>(model.couplings.size()) != dim_s)
        throw ValidationError("model: expected exactly one coupling per system level (" +
                              std::to_string(dim_s) + "), got " +
                              std::to_string(model.couplings.size()));
    if (!std::isfinite(model.beta) || model.beta < 0)
        throw DomainError("model: beta must be finite and >= 0");

    const CMatrix& hb = model.bath_hamiltonian;
    const Eigen::Index D = hb.rows();
    if (D < 1 || hb.cols() != D) throw ValidationError("model: bath Hamiltonian must be square");
    if (!is_hermitian(hb, kHermitianTol)) throw ValidationError("model: bath Hamiltonian is not Hermitian");

    for (std::size_t n = 0; n < model.couplings.size(); ++n) {
        const CMatrix& V = model.couplings[n].V;
        if (V.rows() != D || V.cols() != D)
            throw ValidationError("model: coupling operator " + std::to_string(n) +
                                  " has wrong dimension");
        if (!is_hermitian(V, kHermitianTol))
            throw ValidationError("model: coupling operator " + std::to_string(n) + " is not Hermitian");
        if (!std::isfinite(model.couplings[n].g))
            throw ValidationError("model: coupling constant " + std::to_string(n) + " is not finite");
    }

    const CMatrix& rho = model.initial_system_state;
    if (rho.rows() != dim_s || rho.cols() != dim_s)
        throw ValidationError("model: initial system state has wrong dimension");
    if (!is_hermitian(rho, kStateTol)) throw ValidationError("model: initial system state is not Hermitian");
    if (std::abs(rho.trace() - cd{1.0, 0.0}) > kStateTol)
        throw ValidationError("model: initial system state must have unit trace");
    if (HermitianSpectrum<cd>(rho).values.minCoeff() < -kStateTol)
        throw ValidationError("model: initial system state is not positive semidefinite");

    if (model.chemical_potential && !model.number_operator)
        throw ValidationError("model: chemical potential given without a number operator");
    if (model.number_operator) {
        const CMatrix& N = *model.number_operator;
        if (N.rows() != D || N.cols() != D)
            throw ValidationError("model: number operator has wrong dimension");
        if (!is_hermitian(N, kHermitianTol)) throw ValidationError("model: number operator is not Hermitian");
        if (max_abs(commutator(hb, N)) > kCommuteTol)
            throw ValidationError("model: number operator does not commute with the bath Hamiltonian");
    }
}

ConditionedHamiltonian conditioned_hamiltonian(const DephasingModel& model, Eigen::Index n) {
    if (n < 0 || n >= model.dim_system())
        throw IndexError("level " + level_str(n) + " out of range");
    const Coupling& c = model.couplings[static_cast<std::size_t>(n)];
    return {n, model.bath_hamiltonian + c.g * c.V};
}

ExactDephasing::ExactDephasing(DephasingModel model, OracleOptions options)
    : model_(std::move(model)), options_(options) {
    validate(model_);
    if (model_.dim_bath() > options_.max_bath_dim)
        throw CapacityError("oracle: bath dimension " + std::to_string(model_.dim_bath()) +
                            " exceeds the cap " + std::to_string(options_.max_bath_dim));

    RVector numbers;
    joint_eigenbasis(model_.bath_hamiltonian, model_.number_operator, bath_energies_, numbers,
                     bath_basis_);

    // Gibbs weights with the largest exponent shifted to zero.
    const double mu = model_.chemical_potential.value_or(0.0);
    RVector exponent = -model_.beta * (bath_energies_ - mu * numbers);
    exponent.array() -= exponent.maxCoeff();
    const double log_z = std::log(exponent.array().exp().sum());
    log_thermal_weights_ = exponent.array() - log_z;
    thermal_weights_ = log_thermal_weights_.array().exp();

    conditioned_.reserve(static_cast<std::size_t>(model_.dim_system()));
    for (Eigen::Index n = 0; n < model_.dim_system(); ++n)
        conditioned_.emplace_back(conditioned_hamiltonian(model_, n).op);
}

void ExactDephasing::check_level(Eigen::Index n) const {
    if (n < 0 || n >= model_.dim_system())
        throw IndexError("level " + level_str(n) + " out of range [0, " +
                         std::to_string(model_.dim_system()) + ")");
}

void ExactDephasing::check_time(double t, const char* what) const {
    if (!std::isfinite(t) || t < 0) throw DomainError(std::string(what) + " must be finite and >= 0");
}

double ExactDephasing::population(Eigen::Index n) const {
    return model_.initial_system_state(n, n).real();
}

CMatrix ExactDephasing::thermal_bath_state() const {
    return bath_basis_ * thermal_weights_.cast<cd>().asDiagonal() * bath_basis_.adjoint();
}

cd ExactDephasing::overlap(Eigen::Index m, Eigen::Index n, double t) const {
    check_level(m);
    check_level(n);
    if (!std::isfinite(t)) throw DomainError("time must be finite");
    const CMatrix um = conditioned_[static_cast<std::size_t>(m)].propagator(t);
    const CMatrix un = conditioned_[static_cast<std::size_t>(n)].propagator(t);
    const CMatrix product = un.adjoint() * um;
    return (product * thermal_bath_state()).trace();
}

cd ExactDephasing::reduced_coherence(Eigen::Index m, Eigen::Index n, double t) const {
    check_level(m);
    check_level(n);
    const cd rho_mn = model_.initial_system_state(m, n);
    if (m == n) return rho_mn;
    const double de = model_.system_energies[static_cast<std::size_t>(m)] -
                      model_.system_energies[static_cast<std::size_t>(n)];
    return std::exp(-I * de * t) * overlap(m, n, t) * rho_mn;
}

AtomicDistribution ExactDephasing::conditional_work_distribution(Eigen::Index n, double tf) const {
    check_level(n);
    check_time(tf, "tf");
    const double g = model_.couplings[static_cast<std::size_t>(n)].g;
    if (tf == 0.0 || g == 0.0) return AtomicDistribution({{0.0, 1.0}}, options_.merge_tolerance);

    const CMatrix u = conditioned_[static_cast<std::size_t>(n)].propagator(tf);
    const CMatrix ub = bath_basis_.adjoint() * u * bath_basis_;
    const Eigen::Index D = model_.dim_bath();
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(D * D));
    for (Eigen::Index k = 0; k < D; ++k) {
        const double pk = thermal_weights_(k);
        for (Eigen::Index j = 0; j < D; ++j) {
            const double m2 = std::norm(ub(j, k));
            if (m2 < kRoundoffTransition) continue;
            atoms.push_back({bath_energies_(j) - bath_energies_(k), pk * m2});
        }
    }
    return AtomicDistribution(std::move(atoms), options_.merge_tolerance);
}

AtomicDistribution ExactDephasing::mixture_heat_distribution(double tf) const {
    check_time(tf, "tf");
    std::vector<AtomicDistribution> parts;
    std::vector<double> weights;
    for (Eigen::Index n = 0; n < model_.dim_system(); ++n) {
        const double p = population(n);
        if (p == 0.0) continue;
        parts.push_back(conditional_work_distribution(n, tf));
        weights.push_back(p);
    }
    return AtomicDistribution::mixture(parts, weights, options_.merge_tolerance);
}

cd ExactDephasing::branch_characteristic_function(Eigen::Index n, double tf, cd u) const {
    check_level(n);
    check_time(tf, "tf");
    const HermitianSpectrum<cd>& hn = conditioned_[static_cast<std::size_t>(n)];
    const CMatrix forward = hn.propagator(tf);

    // exp(iu H_B) and exp(-iu H_B) rho_B, both diagonal in the joint bath basis.
    // The second is grouped so that for u = i*lambda, 0 <= lambda <= beta, the
    // Boltzmann factor tames the exp(+lambda E) growth.
    CVector up(model_.dim_bath()), down(model_.dim_bath());
    for (Eigen::Index j = 0; j < model_.dim_bath(); ++j) {
        up(j) = std::exp(I * u * bath_energies_(j));
        down(j) = std::exp(-I * u * bath_energies_(j) + log_thermal_weights_(j));
    }
    if (!up.allFinite() || !down.allFinite())
        throw RangeError("oracle: exp(iu H_B) overflows for |Im u| = " + std::to_string(std::abs(u.imag())));
    const CMatrix counting = bath_basis_ * up.asDiagonal() * bath_basis_.adjoint();
    const CMatrix weighted = bath_basis_ * down.asDiagonal() * bath_basis_.adjoint();
    const CMatrix lhs = forward.adjoint() * counting * forward;
    return (lhs * weighted).trace();
}

cd ExactDephasing::direct_characteristic_function(double tf, cd u) const {
    check_time(tf, "tf");
    cd total{0.0, 0.0};
    for (Eigen::Index n = 0; n < model_.dim_system(); ++n) {
        const double p = population(n);
        if (p == 0.0) continue;
        total += p * branch_characteristic_function(n, tf, u);
    }
    return total;
}

CMatrix ExactDephasing::bath_map_evolve(double t) const {
    check_time(t, "t");
    const CMatrix rho = thermal_bath_state();
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index n = 0; n < model_.dim_system(); ++n) {
        const double p = population(n);
        if (p == 0.0) continue;
        const CMatrix u = conditioned_[static_cast<std::size_t>(n)].propagator(t);
        out.noalias() += p * (u * rho * u.adjoint());
    }
    return out;
}

cd ExactDephasing::static_noise_overlap(Eigen::Index m, Eigen::Index n, double t) const {
    check_level(m);
    check_level(n);
    for (std::size_t k = 0; k < model_.couplings.size(); ++k) {
        const double c = max_abs(commutator(model_.couplings[k].V, model_.bath_hamiltonian));
        if (c > kCommuteTol)
            throw PreconditionError("static noise: coupling " + std::to_string(k) +
                                    " does not commute with H_B (|[V,H_B]| = " + std::to_string(c) + ")");
    }
    std::vector<double> sorted(bath_energies_.data(), bath_energies_.data() + bath_energies_.size());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k)
        if (sorted[k] - sorted[k - 1] <= kDegeneracyGap)
            throw PreconditionError("static noise: bath Hamiltonian is degenerate");

    const Coupling& cm = model_.couplings[static_cast<std::size_t>(m)];
    const Coupling& cn = model_.couplings[static_cast<std::size_t>(n)];
    cd total{0.0, 0.0};
    for (Eigen::Index j = 0; j < model_.dim_bath(); ++j) {
        const auto ej = bath_basis_.col(j);
        const double vn = cn.g * (ej.adjoint() * cn.V * ej)(0, 0).real();
        const double vm = cm.g * (ej.adjoint() * cm.V * ej)(0, 0).real();
        total += thermal_weights_(j) * std::exp(I * (vn - vm) * t);
    }
    return total;
}

} // namespace decoheat::core
