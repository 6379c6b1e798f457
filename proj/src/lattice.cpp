#include "decoheat/lattice.hpp"

#include "decoheat/fock.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace decoheat::lattice {

namespace {

constexpr double kFermiLevelTol = 1e-12;
constexpr int kMaxBisection = 400;

double spectral_scale(const RVector& e) {
    if (e.size() == 0) return 1.0;
    return std::max({std::abs(e.minCoeff()), std::abs(e.maxCoeff()), 1e-300});
}

double fermi(double x) {
    // 1/(exp(x)+1) without overflow
    return x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

} // namespace

void validate(const LatticeSpec& spec) {
    if (spec.sites < 3)
        throw DomainError("lattice.L must be >= 3 (got " + std::to_string(spec.sites) + ")");
    if (!(spec.hopping > 0) || !std::isfinite(spec.hopping))
        throw DomainError("lattice.hopping must be positive");
    if (!std::isfinite(spec.coupling)) throw DomainError("lattice.coupling must be finite");
    if (!(spec.temperature >= 0) || !std::isfinite(spec.temperature))
        throw DomainError("lattice.temperature must be finite and >= 0");
    const int n = spec.target_number();
    if (n <= 0 || n > spec.sites)
        throw DomainError("lattice.N must satisfy 0 < N <= L (got " + std::to_string(n) + ")");
    if (spec.impurity_site < 1 || spec.impurity_site > spec.sites)
        throw IndexError("lattice.impurity_site outside [1, L]");
    if (!std::isfinite(spec.qubit_splitting)) throw DomainError("lattice.epsilon must be finite");
}

double solve_chemical_potential(const RVector& eigenvalues, double temperature, int particles) {
    const Eigen::Index L = eigenvalues.size();
    if (particles < 0 || particles > L)
        throw DomainError("solve_chemical_potential: N outside [0, L]");
    if (!(temperature >= 0)) throw DomainError("solve_chemical_potential: T must be >= 0");
    const double scale = spectral_scale(eigenvalues);

    std::vector<double> e(eigenvalues.data(), eigenvalues.data() + L);
    std::sort(e.begin(), e.end());
    if (temperature == 0.0) {
        if (particles == 0) return e.front() - scale;
        if (particles == L) return e.back() + scale;
        return 0.5 * (e[static_cast<std::size_t>(particles - 1)] + e[static_cast<std::size_t>(particles)]);
    }

    auto excess = [&](double mu) {
        double s = 0.0;
        for (double x : e) s += fermi((x - mu) / temperature);
        return s - particles;
    };
    double lo = e.front() - 40.0 * temperature;
    double hi = e.back() + 40.0 * temperature;
    double flo = excess(lo);
    double fhi = excess(hi);
    // Σ f never reaches 0 or L exactly; accept the bracket end when within rounding.
    if (std::abs(flo) <= 1e-10) return lo;
    if (std::abs(fhi) <= 1e-10) return hi;
    if (flo > 0 || fhi < 0)
        throw NumericalError("solve_chemical_potential: no sign change in bracket");
    for (int it = 0; it < kMaxBisection && hi - lo > 1e-15 * scale; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = excess(mid);
        if (fm == 0.0) return mid;
        (fm < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RVector fermi_occupations(const RVector& eigenvalues, double temperature, double mu) {
    RVector f(eigenvalues.size());
    if (temperature == 0.0) {
        const double tol = kFermiLevelTol * spectral_scale(eigenvalues);
        for (Eigen::Index k = 0; k < f.size(); ++k) {
            const double d = eigenvalues(k) - mu;
            f(k) = std::abs(d) < tol ? 0.5 : (d < 0 ? 1.0 : 0.0);
        }
        return f;
    }
    for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = fermi((eigenvalues(k) - mu) / temperature);
    return f;
}

RMatrix occupation_operator(const RVector& eigenvalues, const RMatrix& eigenvectors,
                            double temperature, double mu) {
    const RVector f = fermi_occupations(eigenvalues, temperature, mu);
    return eigenvectors * f.asDiagonal() * eigenvectors.transpose();
}

SpectralCache::SpectralCache(const LatticeSpec& spec) : spec_(spec) {
    validate(spec_);
    const RMatrix h0 = ring_hamiltonian(spec_.sites, spec_.hopping);
    const RMatrix h1 = with_impurity(h0, spec_.coupling, spec_.impurity_site);
    h0_ = HermitianSpectrum<double>(h0);
    h1_ = HermitianSpectrum<double>(h1);
    mu_ = solve_chemical_potential(h0_.values, spec_.temperature, spec_.target_number());
    occupations_ = fermi_occupations(h0_.values, spec_.temperature, mu_);
    overlap_ = h0_.vectors.transpose() * h1_.vectors;
}

RMatrix SpectralCache::occupation_operator() const {
    return h0_.vectors * occupations_.asDiagonal() * h0_.vectors.transpose();
}

core::DephasingModel many_body_model(const LatticeSpec& spec, const CMatrix& initial_qubit_state,
                                     Ensemble ensemble) {
    validate(spec);
    if (spec.temperature <= 0)
        throw DomainError("many_body_model: the thermal oracle needs T > 0");
    const fock::FockBasis basis = ensemble == Ensemble::GrandCanonical
                                      ? fock::FockBasis::full(spec.sites)
                                      : fock::FockBasis::sector(spec.sites, spec.target_number());

    const RMatrix h0 = ring_hamiltonian(spec.sites, spec.hopping);
    CMatrix impurity = CMatrix::Zero(spec.sites, spec.sites);
    impurity(spec.impurity_site - 1, spec.impurity_site - 1) = 1.0;

    core::DephasingModel model;
    model.system_energies = {-0.5 * spec.qubit_splitting, 0.5 * spec.qubit_splitting};
    model.bath_hamiltonian = fock::quadratic_operator(basis, h0.cast<cd>());
    const CMatrix occupation = fock::quadratic_operator(basis, impurity);
    model.couplings = {{0.0, CMatrix::Zero(basis.dim(), basis.dim())}, {spec.coupling, occupation}};
    model.beta = spec.beta();
    model.initial_system_state = initial_qubit_state;
    if (ensemble == Ensemble::GrandCanonical) {
        const HermitianSpectrum<double> es(h0);
        model.chemical_potential = solve_chemical_potential(es.values, spec.temperature, spec.target_number());
        model.number_operator = fock::number_operator(basis);
    }
    return model;
}

CMatrix plus_state() {
    return CMatrix::Constant(2, 2, cd{0.5, 0.0});
}

} // namespace decoheat::lattice
