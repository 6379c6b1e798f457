#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoheat/dephasing.hpp"
#include "decoheat/errors.hpp"
#include "decoheat/fda.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace decoheat;
using namespace decoheat::fda;
using lattice::LatticeSpec;
using lattice::SpectralCache;

namespace {

LatticeSpec spec(int L, double g, double T, int site = 1) {
    LatticeSpec s;
    s.sites = L;
    s.coupling = g;
    s.temperature = T;
    s.impurity_site = site;
    return s;
}

} // namespace

TEST_CASE("decoherence function trivial cases") {
    SpectralCache c(spec(20, 0.7, 0.1));
    CHECK(decoherence_function(c, 0.0) == cd(1.0, 0.0));
    SpectralCache free(spec(20, 0.0, 0.1));
    for (double t : {1.0, 50.0, 900.0}) CHECK(decoherence_function(free, t) == cd(1.0, 0.0));
    CHECK_THROWS_AS(decoherence_function(c, std::nan("")), DomainError);
}

TEST_CASE("decoherence function against the Fock-space oracle at L = 6") {
    const LatticeSpec s = spec(6, 0.5, 0.1);
    SpectralCache c(s);
    core::ExactDephasing o(lattice::many_body_model(s, lattice::plus_state()));
    CHECK(std::abs(decoherence_function(c, 5.0) - o.overlap(1, 0, 5.0)) < 1e-10);
    oracle::ManyBody mb(6, 0.5, 0.1, c.mu());
    CHECK(std::abs(decoherence_function(c, 5.0) - mb.nu(5.0)) < 1e-10);
}

TEST_CASE("decoherence is bounded and conjugate-symmetric in time") {
    SpectralCache c(spec(40, 1.0, 0.05));
    for (double t : {0.5, 3.0, 20.0, 70.0}) {
        const cd nu = decoherence_function(c, t);
        CHECK(std::abs(nu) <= 1.0 + 1e-12);
        CHECK(std::abs(decoherence_function(c, -t) - std::conj(nu)) < 1e-12);
    }
}

TEST_CASE("impurity position does not matter on a ring") {
    SpectralCache a(spec(14, 0.8, 0.2, 1));
    SpectralCache b(spec(14, 0.8, 0.2, 9));
    for (double t : {1.0, 7.5, 33.0}) CHECK(std::abs(decoherence_function(a, t) - decoherence_function(b, t)) < 1e-11);
    BranchCharacteristic ta(a, 3.0), tb(b, 3.0);
    for (double u : {-1.1, 0.4, 2.2}) CHECK(std::abs(ta(u) - tb(u)) < 1e-11);
}

TEST_CASE("branch characteristic trivial cases") {
    SpectralCache c(spec(16, 1.0, 0.1));
    BranchCharacteristic b(c, 4.0);
    CHECK(b(0.0) == cd(1.0, 0.0));
    BranchCharacteristic idle(c, 0.0);
    for (cd u : {cd(0.5, 0), cd(-3, 0), cd(0, 2)}) CHECK(idle(u) == cd(1.0, 0.0));
    CHECK_THROWS_AS(BranchCharacteristic(c, -1.0), DomainError);
    CHECK_THROWS_AS(b(cd(std::nan(""), 0)), DomainError);
}

TEST_CASE("branch characteristic against the oracle at L = 6") {
    const LatticeSpec s = spec(6, 1.0, 0.1);
    SpectralCache c(s);
    core::ExactDephasing o(lattice::many_body_model(s, lattice::plus_state()));
    BranchCharacteristic b(c, 2.0);
    CHECK(std::abs(b(1.3) - o.branch_characteristic_function(1, 2.0, 1.3)) < 1e-10);

    oracle::ManyBody mb(6, 1.0, 0.1, c.mu());
    for (cd u : {cd(1.3, 0), cd(-0.6, 0), cd(0.2, 0.8), cd(0, 3.0)})
        CHECK(std::abs(b(u) - mb.theta1(2.0, u)) < 1e-10 * std::max(1.0, std::abs(mb.theta1(2.0, u))));
}

TEST_CASE("fluctuation relation on the branch") {
    for (double T : {0.01, 0.1, 1.0}) {
        SpectralCache c(spec(60, 1.0, T));
        for (double tf : {1.0, 10.0, 100.0}) {
            BranchCharacteristic b(c, tf);
            CHECK(std::abs(b(cd(0, 1.0 / T)) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("range error for unmanageable imaginary fields at T = 0") {
    SpectralCache c(spec(20, 1.0, 0.0));
    BranchCharacteristic b(c, 2.0);
    CHECK_NOTHROW(b(cd(0.3, 0.5)));
    CHECK_THROWS_AS(b(cd(0, 2000.0)), RangeError);
    try {
        b(cd(0, 2000.0));
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("2000") != std::string::npos);
    }
}

TEST_CASE("full characteristic function") {
    SpectralCache c(spec(24, 0.5, 0.2));
    CHECK(full_characteristic_function(c, {0.5, 0.5}, 3.0, 0.0) == cd(1.0, 0.0));
    for (double u : {0.3, -2.0, 8.0}) CHECK(full_characteristic_function(c, {1.0, 0.0}, 3.0, u) == cd(1.0, 0.0));
    CHECK(std::abs(full_characteristic_function(c, {0.5, 0.5}, 3.0, cd(0, 5.0)) - 1.0) < 1e-8);
    CHECK_THROWS_AS(full_characteristic_function(c, {0.7, 0.7}, 3.0, 0.1), DomainError);
    CHECK_THROWS_AS(check_branch_probabilities({-0.1, 1.1}), DomainError);
    CHECK_NOTHROW(check_branch_probabilities({0.25, 0.75}));
}

TEST_CASE("mean work trace against the oracle") {
    for (int L : {4, 5, 6}) {
        const LatticeSpec s = spec(L, 1.0, 0.1);
        SpectralCache c(s);
        core::ExactDephasing o(lattice::many_body_model(s, lattice::plus_state()));
        BranchCharacteristic b(c, 2.0);
        CHECK(std::abs(b.mean_work_trace() - o.conditional_work_distribution(1, 2.0).mean()) < 1e-8);
    }
}

TEST_CASE("series") {
    SpectralCache c(spec(30, 0.5, 0.05));
    std::vector<double> times{0.0, 1.0, 2.5, 10.0, 40.0};
    auto one = decoherence_series(c, times, 1);
    auto many = decoherence_series(c, times, 3);
    REQUIRE(one.values.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(one.values[i] == many.values[i]);
        CHECK(one.log_magnitudes[i] == doctest::Approx(std::log(std::abs(one.values[i]))));
        CHECK(one.phase_reliable[i]);
    }
    CHECK(one.values[0] == cd(1.0, 0.0));

    BranchCharacteristic b(c, 5.0);
    std::vector<double> us{-2.0, -0.5, 0.0, 1.0};
    auto th = characteristic_series(b, us, 2);
    for (std::size_t i = 0; i < us.size(); ++i) CHECK(th.values[i] == b(us[i]));

    std::vector<double> bad{0.0, 2.0, 2.0};
    CHECK_THROWS_AS(decoherence_series(c, bad), DomainError);
    CHECK_THROWS_AS(characteristic_series(b, bad), DomainError);
}

TEST_CASE("T = 0 decoherence at L = 500 follows a power law before the revival") {
    SpectralCache c(spec(500, 0.1, 0.0));
    std::vector<double> lt, ly;
    for (int k = 0; k <= 12; ++k) {
        const double t = 10.0 * std::pow(40.0, k / 12.0);
        lt.push_back(std::log(t));
        ly.push_back(log_decoherence_function(c, t).log_magnitude);
    }
    const auto fit = oracle::linear_fit(lt, ly);
    CHECK(fit.slope < 0.0);
    CHECK(fit.r2 > 0.95);
}
