#include "decoheat/fda.hpp"

#include "decoheat/errors.hpp"
#include "decoheat/parallel.hpp"

#include <cmath>
#include <sstream>

namespace decoheat::fda {

namespace {

// exp() of anything above this overflows or leaves no headroom for the products.
constexpr double kMaxExponent = 700.0;

// Φ diag(exp(i s ε1)) Φᵀ using two real products.
CMatrix rotate_phases(const RMatrix& phi, const RVector& eps, double s) {
    const RVector c = (s * eps).array().cos();
    const RVector sn = (s * eps).array().sin();
    const RMatrix re = (phi * c.asDiagonal()) * phi.transpose();
    const RMatrix im = (phi * sn.asDiagonal()) * phi.transpose();
    CMatrix out(phi.rows(), phi.rows());
    out.real() = re;
    out.imag() = im;
    return out;
}

void check_grid(std::span<const double> grid) {
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw DomainError("series grid must be strictly increasing");
}

std::string range_message(cd u, double scale) {
    std::ostringstream os;
    os << "counting field |Im u|*Omega = " << std::abs(u.imag()) * scale
       << " overflows exp(i u h0)";
    return os.str();
}

} // namespace

LogComplex log_decoherence_function(const lattice::SpectralCache& cache, double t) {
    if (!std::isfinite(t)) throw DomainError("decoherence_function: t must be finite");
    // h1 = h0 when g = 0; the overlap is exactly 1.
    if (t == 0.0 || cache.spec().coupling == 0.0) return {};
    const RVector& e0 = cache.h0_eigenvalues();
    const RVector& f = cache.occupations();
    const Eigen::Index L = cache.sites();

    // e^{-i h1 t} in the h0 basis, then rows scaled by f_k e^{i ε0_k t}.
    CMatrix x = rotate_phases(cache.overlap(), cache.h1_eigenvalues(), -t);
    for (Eigen::Index k = 0; k < L; ++k) x.row(k) *= f(k) * std::exp(I * e0(k) * t);
    x.diagonal().array() += (1.0 - f.array()).cast<cd>();
    return log_determinant(x);
}

cd decoherence_function(const lattice::SpectralCache& cache, double t) {
    return log_decoherence_function(cache, t).value();
}

BranchCharacteristic::BranchCharacteristic(const lattice::SpectralCache& cache, double tf)
    : cache_(&cache), tf_(tf) {
    if (!std::isfinite(tf) || tf < 0) throw DomainError("branch characteristic: tf must be finite and >= 0");
    forward_ = rotate_phases(cache.overlap(), cache.h1_eigenvalues(), tf);
}

LogComplex BranchCharacteristic::log_value(cd u) const {
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
        throw DomainError("branch characteristic: u must be finite");
    if (u == cd{0.0, 0.0} || tf_ == 0.0 || cache_->spec().coupling == 0.0) return {};
    if (u.imag() != 0.0 && cache_->temperature() > 0) return rescaled(u);
    return direct(u);
}

// det[1 - n + n A E A† E^{-1}],  A = e^{i tf h1}, E = e^{i u h0}
LogComplex BranchCharacteristic::direct(cd u) const {
    const RVector& e0 = cache_->h0_eigenvalues();
    const RVector& f = cache_->occupations();
    const Eigen::Index L = cache_->sites();

    const double scale = cache_->spec().hopping;
    if (std::abs(u.imag()) * e0.cwiseAbs().maxCoeff() > kMaxExponent)
        throw RangeError(range_message(u, scale));

    CVector phase(L);
    for (Eigen::Index k = 0; k < L; ++k) phase(k) = std::exp(I * u * e0(k));
    const CMatrix left = forward_ * phase.asDiagonal();
    CMatrix x = left * forward_.conjugate();
    for (Eigen::Index l = 0; l < L; ++l) x.col(l) /= phase(l);
    for (Eigen::Index k = 0; k < L; ++k) x.row(k) *= f(k);
    x.diagonal().array() += (1.0 - f.array()).cast<cd>();
    if (!x.allFinite()) throw RangeError(range_message(u, scale));
    return log_determinant(x);
}

// For Im u != 0 at T > 0:
//   det[1 - n + n A E A† E^{-1}] = det(1 - n) det[1 + S A† G A S]
// with S = E^{1/2} and G = E^{-1} n/(1 - n) = diag(e^{-iuε - β(ε-μ)}). The
// Boltzmann factor in G absorbs the e^{+λε} growth of E^{-1} (u = iλ) before any
// product is formed; at λ = β the bracket collapses to 1 + e^{-β(h0-μ)}.
LogComplex BranchCharacteristic::rescaled(cd u) const {
    const RVector& e0 = cache_->h0_eigenvalues();
    const Eigen::Index L = cache_->sites();
    const double beta = cache_->beta();
    const double mu = cache_->mu();

    CVector s(L), g(L);
    double log_one_minus_n = 0.0;
    for (Eigen::Index k = 0; k < L; ++k) {
        const double x = beta * (e0(k) - mu);
        const cd log_s = 0.5 * I * u * e0(k);
        const cd log_g = -I * u * e0(k) - x;
        if (log_s.real() > kMaxExponent || log_g.real() > kMaxExponent)
            throw RangeError(range_message(u, cache_->spec().hopping));
        s(k) = std::exp(log_s);
        g(k) = std::exp(log_g);
        log_one_minus_n -= softplus(-x);
    }
    CMatrix y = forward_.conjugate() * g.asDiagonal();
    y = (y * forward_).eval();
    y = s.asDiagonal() * y * s.asDiagonal();
    y.diagonal().array() += 1.0;
    if (!y.allFinite()) throw RangeError(range_message(u, cache_->spec().hopping));
    LogComplex out = log_determinant(y);
    out.log_magnitude += log_one_minus_n;
    return out;
}

double BranchCharacteristic::mean_work_trace() const {
    const RVector& e0 = cache_->h0_eigenvalues();
    const RVector& f = cache_->occupations();
    double total = 0.0;
    for (Eigen::Index k = 0; k < e0.size(); ++k) {
        if (f(k) == 0.0) continue;
        // [A ε0 A†]_kk = Σ_m |A_km|² ε0_m
        const double heisenberg = (forward_.row(k).cwiseAbs2().transpose().cwiseProduct(e0)).sum();
        total += f(k) * (heisenberg - e0(k));
    }
    return total;
}

cd heat_characteristic_branch(const lattice::SpectralCache& cache, double tf, cd u) {
    return BranchCharacteristic(cache, tf)(u);
}

void check_branch_probabilities(std::array<double, 2> p) {
    if (!(p[0] >= 0) || !(p[1] >= 0) || std::abs(p[0] + p[1] - 1.0) > 1e-12)
        throw DomainError("branch probabilities must be non-negative and sum to 1");
}

cd full_characteristic_function(const lattice::SpectralCache& cache, std::array<double, 2> p,
                                double tf, cd u) {
    check_branch_probabilities(p);
    if (p[1] == 0.0) return {1.0, 0.0};
    return p[0] + p[1] * heat_characteristic_branch(cache, tf, u);
}

void ComplexSeries::push_back(double x, const LogComplex& z) {
    grid.push_back(x);
    values.push_back(z.value());
    log_magnitudes.push_back(z.log_magnitude);
    phases.push_back(z.phase);
    phase_reliable.push_back(z.phase_reliable);
}

ComplexSeries decoherence_series(const lattice::SpectralCache& cache, std::span<const double> times,
                                 std::size_t threads) {
    check_grid(times);
    const auto logs = parallel_map(times.size(), threads,
                                   [&](std::size_t i) { return log_decoherence_function(cache, times[i]); });
    ComplexSeries out;
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(times[i], logs[i]);
    return out;
}

ComplexSeries characteristic_series(const BranchCharacteristic& branch, std::span<const double> u_grid,
                                    std::size_t threads) {
    check_grid(u_grid);
    const auto logs = parallel_map(u_grid.size(), threads,
                                   [&](std::size_t i) { return branch.log_value(cd{u_grid[i], 0.0}); });
    ComplexSeries out;
    for (std::size_t i = 0; i < u_grid.size(); ++i) out.push_back(u_grid[i], logs[i]);
    return out;
}

} // namespace decoheat::fda
