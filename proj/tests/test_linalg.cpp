#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoheat/linalg.hpp"
#include "decoheat/parallel.hpp"
#include "oracles.hpp"

#include <stdexcept>

using namespace decoheat;

TEST_CASE("hermitian checks") {
    CMatrix a(2, 2);
    a << 1.0, cd(0, 1), cd(0, -1), 2.0;
    CHECK(is_hermitian(a, 1e-14));
    a(0, 1) = cd(0.5, 1);
    CHECK_FALSE(is_hermitian(a, 1e-14));
    CHECK(hermiticity_defect(a) == doctest::Approx(0.5));
    CHECK_FALSE(is_hermitian(CMatrix::Zero(2, 3), 1.0));
}

TEST_CASE("commutator of diagonal matrices vanishes") {
    RMatrix a = RVector::LinSpaced(4, 0, 3).asDiagonal();
    RMatrix b = RVector::LinSpaced(4, 1, -2).asDiagonal();
    CHECK(max_abs(commutator(a, b)) == 0.0);
    RMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    CHECK(max_abs(commutator(x, z)) == doctest::Approx(2.0));
}

TEST_CASE_TEMPLATE("spectrum reconstructs the input", Scalar, double, cd) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat h = Mat::Random(6, 6);
    h = (h + h.adjoint()).eval();
    HermitianSpectrum<Scalar> s(h);
    CHECK(max_abs(s.reconstruct() - h) < 1e-12);
    for (Eigen::Index k = 1; k < s.dim(); ++k) CHECK(s.values(k) >= s.values(k - 1));
}

TEST_CASE("propagator agrees with a Pade exponential") {
    CMatrix h = CMatrix::Random(5, 5);
    h = (h + h.adjoint()).eval();
    HermitianSpectrum<cd> s(h);
    for (double t : {0.0, 0.3, 2.5, 17.0}) {
        CMatrix u = s.propagator(t);
        CHECK(max_abs(u - oracle::expm(cd(0, -t) * h)) < 1e-11);
        CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(5, 5)) < 1e-12);
    }
    CHECK(max_abs(s.exponential(cd(-0.7, 0.2)) - oracle::expm(cd(-0.7, 0.2) * h)) < 1e-11);
}

TEST_CASE("log determinant") {
    CMatrix m = CMatrix::Random(7, 7) + 3.0 * CMatrix::Identity(7, 7);
    const cd d = m.determinant();
    const LogComplex l = log_determinant(m);
    CHECK(l.phase_reliable);
    CHECK(l.log_magnitude == doctest::Approx(std::log(std::abs(d))).epsilon(1e-12));
    CHECK(std::abs(l.value() - d) < 1e-10 * std::abs(d));

    SUBCASE("singular") {
        CMatrix s = CMatrix::Zero(3, 3);
        s(0, 0) = 1.0;
        const LogComplex z = log_determinant(s);
        CHECK(z.is_zero());
        CHECK_FALSE(z.phase_reliable);
        CHECK(z.value() == cd(0, 0));
    }
    SUBCASE("tiny but representable via logs") {
        CMatrix t = 1e-30 * CMatrix::Identity(20, 20);
        const LogComplex z = log_determinant(t);
        CHECK(z.log_magnitude == doctest::Approx(20 * std::log(1e-30)));
        CHECK(z.magnitude() == 0.0);
    }
    SUBCASE("empty") { CHECK(log_determinant(CMatrix(0, 0)).value() == cd(1, 0)); }
}

TEST_CASE("LogComplex products") {
    LogComplex a = LogComplex::from_value(cd(0, 2));
    LogComplex b = LogComplex::from_value(cd(-3, 0));
    CHECK(std::abs((a * b).value() - cd(0, -6)) < 1e-14);
    CHECK(LogComplex::from_value(0.0).is_zero());
}

TEST_CASE("softplus") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(softplus(800.0) == doctest::Approx(800.0));
    CHECK(softplus(-800.0) >= 0.0);
    CHECK(softplus(-800.0) < 1e-300);
    CHECK(softplus(3.0) == doctest::Approx(std::log1p(std::exp(3.0))));
}

TEST_CASE("parallel_map is ordered and rethrows") {
    auto sq = parallel_map(100, 4, [](std::size_t i) { return static_cast<double>(i * i); });
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<double>(i * i));
    CHECK_THROWS_AS(parallel_map(10, 3,
                                 [](std::size_t i) -> int {
                                     if (i == 7) throw std::runtime_error("boom");
                                     return 0;
                                 }),
                    std::runtime_error);
    CHECK(parallel_map(0, 4, [](std::size_t) { return 1; }).empty());
}
