#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoheat/dephasing.hpp"
#include "decoheat/errors.hpp"
#include "decoheat/fda.hpp"
#include "decoheat/heat_stats.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace decoheat;
using namespace decoheat::heat;
using lattice::LatticeSpec;
using lattice::SpectralCache;

namespace {

LatticeSpec spec(int L, double g, double T) {
    LatticeSpec s;
    s.sites = L;
    s.coupling = g;
    s.temperature = T;
    return s;
}

CMatrix plus() { return CMatrix::Constant(2, 2, 0.5); }

// regression fixture: L = 500, g = 1, T = 0.1, default window
constexpr double kLongTimeHeatFixture = 0.14373462502206416;

} // namespace

TEST_CASE("moments of a known distribution") {
    AtomicDistribution d({{-0.5, 0.2}, {0.0, 0.3}, {1.0, 0.4}, {2.5, 0.1}});
    CharacteristicFunction theta = [&](cd u) { return d.characteristic(u); };
    double raw[5] = {1, 0, 0, 0, 0};
    for (const auto& a : d.atoms())
        for (int k = 1; k <= 4; ++k) raw[k] += a.weight * std::pow(a.value, k);
    CHECK(heat_moment(theta, 1) == doctest::Approx(raw[1]).epsilon(1e-9));
    CHECK(heat_moment(theta, 2) == doctest::Approx(raw[2]).epsilon(1e-8));
    CHECK(heat_moment(theta, 3) == doctest::Approx(raw[3]).epsilon(1e-6));
    CHECK(heat_moment(theta, 4) == doctest::Approx(raw[4]).epsilon(1e-5));

    auto mv = heat_mean_variance(theta);
    CHECK(mv.mean == doctest::Approx(d.mean()).epsilon(1e-9));
    CHECK(mv.variance == doctest::Approx(d.variance()).epsilon(1e-8));
}

TEST_CASE("moments vanish without heat") {
    CharacteristicFunction one = [](cd) { return cd(1.0, 0.0); };
    for (int k = 1; k <= 4; ++k) CHECK(heat_moment(one, k) == 0.0);
    SpectralCache c(spec(20, 1.0, 0.1));
    fda::BranchCharacteristic idle(c, 0.0);
    for (int k = 1; k <= 4; ++k) CHECK(heat_moment([&](cd u) { return idle(u); }, k) == 0.0);
}

TEST_CASE("moment argument checks") {
    CharacteristicFunction one = [](cd) { return cd(1.0, 0.0); };
    CHECK_THROWS_AS(heat_moment(one, 0), DomainError);
    CHECK_THROWS_AS(heat_moment(one, 5), DomainError);
    CHECK_THROWS_AS(heat_moment(one, 1, -1e-3), DomainError);
    CHECK_THROWS_AS(heat_mean_variance(one, 0.0), DomainError);
    CHECK(default_step(1) == kDefaultDeltaU);
    CHECK(default_step(4) > default_step(2));
}

TEST_CASE("imaginary residue is reported") {
    // real first derivative means an imaginary mean
    CharacteristicFunction bad = [](cd u) { return std::exp(u); };
    CHECK_THROWS_AS(heat_moment(bad, 1), NumericalError);
}

TEST_CASE("first moment against the oracle at L = 6") {
    const LatticeSpec s = spec(6, 1.0, 0.1);
    SpectralCache c(s);
    core::ExactDephasing o(lattice::many_body_model(s, plus()));
    const double tf = 2.0;
    const double oracle_mean = o.mixture_heat_distribution(tf).mean();
    CharacteristicFunction theta = [&](cd u) { return fda::full_characteristic_function(c, {0.5, 0.5}, tf, u); };
    CHECK(std::abs(heat_moment(theta, 1) - oracle_mean) < 1e-6);
    fda::BranchCharacteristic b(c, tf);
    CHECK(std::abs(0.5 * b.mean_work_trace() - oracle_mean) < 1e-8);
    CHECK(heat_moment(theta, 2) == doctest::Approx(o.mixture_heat_distribution(tf).variance() + oracle_mean * oracle_mean).epsilon(1e-6));
}

TEST_CASE("fluctuation residual") {
    CharacteristicFunction one = [](cd) { return cd(1.0, 0.0); };
    CHECK(fluctuation_residual(one, 10.0) == 0.0);
    CHECK_THROWS_AS(fluctuation_residual(one, 0.0), DomainError);
    CHECK_THROWS_AS(fluctuation_residual(one, std::numeric_limits<double>::infinity()), DomainError);

    const LatticeSpec s = spec(6, 1.0, 0.2);
    core::ExactDephasing o(lattice::many_body_model(s, plus()));
    CharacteristicFunction exact = [&](cd u) { return o.direct_characteristic_function(3.0, u); };
    CHECK(fluctuation_residual(exact, 5.0) < 1e-10);
    auto atoms = o.mixture_heat_distribution(3.0);
    CHECK(std::abs(atoms.exponential_average(5.0) - 1.0) < 1e-10);

    SpectralCache c(spec(80, 0.5, 0.01));
    CharacteristicFunction fda_theta = [&](cd u) { return fda::full_characteristic_function(c, {0.5, 0.5}, 10.0, u); };
    CHECK(fluctuation_residual(fda_theta, 100.0) < 1e-8);
}

TEST_CASE("entropy ledger") {
    const double beta = 2.0;
    SUBCASE("t = 0") {
        auto l = entropy_ledger(1.0, 0.0, beta, plus());
        CHECK(std::abs(l.delta_s) < 1e-12);
        CHECK(l.heat_flux == 0.0);
        CHECK(std::abs(l.sigma) < 1e-12);
    }
    SUBCASE("full dephasing") {
        CHECK(entropy_ledger(0.0, 0.0, beta, plus()).delta_s == doctest::Approx(std::log(2.0)));
    }
    SUBCASE("half coherence") {
        auto l = entropy_ledger(std::polar(0.5, 1.2), 0.1, beta, plus());
        CHECK(std::abs(l.delta_s - oracle::binary_entropy(0.75)) < 1e-12);
        CHECK(std::abs(l.delta_s - 0.5623) < 1e-4);
        CHECK(l.heat_flux == doctest::Approx(0.2));
        CHECK(l.sigma == doctest::Approx(l.delta_s + 0.2));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(entropy_ledger(1.1, 0.0, beta, plus()), DomainError);
        CHECK_THROWS_AS(entropy_ledger(0.5, 0.0, -1.0, plus()), DomainError);
        CHECK_THROWS_AS(entropy_ledger(0.5, 0.0, beta, CMatrix::Identity(3, 3) / 3.0), ValidationError);
    }
    SUBCASE("von Neumann entropy") {
        CHECK(von_neumann_entropy(plus()) == doctest::Approx(0.0).scale(1.0));
        CHECK(von_neumann_entropy(CMatrix::Identity(4, 4) / 4.0) == doctest::Approx(std::log(4.0)));
    }
}

TEST_CASE("density inversion without coupling") {
    CharacteristicFunction one = [](cd) { return cd(1.0, 0.0); };
    auto d = invert_to_density(one, 5.0, 3.0, 0.05, 0.5);
    CHECK(d.zero_atom_weight == doctest::Approx(1.0).epsilon(1e-12));
    double worst = 0.0;
    for (double x : d.density) worst = std::max(worst, std::abs(x));
    CHECK(worst < 1e-9);
}

TEST_CASE("density inversion against broadened oracle atoms at L = 6") {
    const LatticeSpec s = spec(6, 1.0, 0.1);
    SpectralCache c(s);
    core::ExactDephasing o(lattice::many_body_model(s, plus()));
    const double tf = 2.0, sigma = 0.1, q_max = 8.0;
    fda::BranchCharacteristic b(c, tf);
    auto d = invert_to_density([&](cd u) { return b(u); }, tf, q_max, sigma, 0.5);
    auto atoms = o.mixture_heat_distribution(tf);

    CHECK(d.zero_atom_weight == doctest::Approx(atoms.weight_near(0.0, 1e-9)).epsilon(1e-6));
    double worst = 0.0;
    for (std::size_t i = 0; i < d.q_grid.size(); ++i)
        worst = std::max(worst, std::abs(d.density[i] - atoms.gaussian_density(d.q_grid[i], sigma, 1e-9)));
    CHECK(worst < 1e-6);
    CHECK(d.symmetry_residual < 1e-12);
    CHECK(d.regular_weight() == doctest::Approx(1.0 - d.zero_atom_weight).epsilon(1e-6));
    CHECK(d.mean() == doctest::Approx(atoms.mean()).epsilon(1e-6));
    CHECK(d.sigma == sigma);
    CHECK(d.q_max == q_max);
}

TEST_CASE("density inversion argument checks") {
    CharacteristicFunction one = [](cd) { return cd(1.0, 0.0); };
    CHECK_THROWS_AS(invert_to_density(one, 1.0, 3.0, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(invert_to_density(one, 1.0, -1.0, 0.1, 0.5), DomainError);
    CHECK_THROWS_AS(invert_to_density(one, 1.0, 3.0, 0.1, 1.5), DomainError);
}

TEST_CASE("aliased inversion fails the normalization check") {
    AtomicDistribution d({{0.0, 0.2}, {2.7, 0.8}});
    CharacteristicFunction theta = [&](cd u) { return d.characteristic(u); };
    CHECK_THROWS_AS(invert_to_density(theta, 1.0, 1.0, 0.2, 0.0), NumericalError);
    CHECK_NOTHROW(invert_to_density(theta, 1.0, 4.0, 0.2, 0.0));
}

TEST_CASE("long-time heat") {
    SUBCASE("no coupling") {
        auto r = long_time_mean_heat(spec(40, 0.0, 0.1));
        CHECK(r.mean == 0.0);
        CHECK(r.samples.size() == 50);
        CHECK(r.times.front() == 500.0);
        CHECK(r.times.back() == 1000.0);
    }
    SUBCASE("window checks") {
        CHECK_THROWS_AS(long_time_mean_heat(spec(20, 1.0, 0.1), TimeWindow{10.0, 5.0, 10}), DomainError);
        CHECK_THROWS_AS(long_time_mean_heat(spec(20, 1.0, 0.1), TimeWindow{0.0, 5.0, 1}), DomainError);
    }
    SUBCASE("transient window is flagged") {
        auto r = long_time_mean_heat(spec(60, 1.0, 0.1), TimeWindow{0.05, 2.0, 20});
        CHECK_FALSE(r.saturated);
    }
    SUBCASE("L = 500 regression fixture and temperature trend") {
        auto mid = long_time_mean_heat(spec(500, 1.0, 0.1));
        CHECK(mid.mean > 0.0);
        CHECK(mid.saturated);
        CHECK(mid.mean == doctest::Approx(kLongTimeHeatFixture).epsilon(1e-9));
        auto cold = long_time_mean_heat(spec(500, 1.0, 0.01));
        auto hot = long_time_mean_heat(spec(500, 1.0, 1.0));
        CHECK(cold.mean > hot.mean);
    }
}

TEST_CASE("linspace") {
    auto v = linspace(1.0, 2.0, 5);
    REQUIRE(v.size() == 5);
    CHECK(v[0] == 1.0);
    CHECK(v[2] == 1.5);
    CHECK(v[4] == 2.0);
}
