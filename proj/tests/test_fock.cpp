#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoheat/errors.hpp"
#include "decoheat/fock.hpp"
#include "decoheat/lattice.hpp"
#include "oracles.hpp"

using namespace decoheat;
using namespace decoheat::fock;

TEST_CASE("basis sizes") {
    CHECK(FockBasis::full(4).dim() == 16);
    CHECK(FockBasis::sector(6, 3).dim() == 20);
    CHECK(FockBasis::sector(5, 0).dim() == 1);
    CHECK_THROWS_AS(FockBasis::full(0), DomainError);
    CHECK_THROWS_AS(FockBasis::full(30), DomainError);
    CHECK_THROWS_AS(FockBasis::sector(4, 5), DomainError);
}

TEST_CASE("index lookup") {
    auto b = FockBasis::sector(4, 2);
    for (Eigen::Index k = 0; k < b.dim(); ++k) CHECK(b.index_of(b.states()[k]) == k);
    CHECK_FALSE(b.index_of(0b0111).has_value());
}

TEST_CASE("hop signs") {
    // c†_2 c_0 on |0,1 occupied>: one occupied mode (1) between, sign -1
    auto r = apply_hop(0b011, 2, 0);
    REQUIRE(r.has_value());
    CHECK(r->state == 0b110);
    CHECK(r->sign == -1);
    CHECK_FALSE(apply_hop(0b001, 2, 1).has_value());
    CHECK_FALSE(apply_hop(0b101, 2, 0).has_value());
    auto n = apply_hop(0b100, 2, 2);
    REQUIRE(n.has_value());
    CHECK(n->state == 0b100);
    CHECK(n->sign == 1);
}

TEST_CASE("quadratic operator matches Jordan-Wigner products") {
    for (int L : {3, 4, 5}) {
        RMatrix h = lattice::with_impurity(lattice::ring_hamiltonian(L, 1.0), 0.7, 2);
        h(0, 2) = h(2, 0) = 0.3;
        CMatrix mine = quadratic_operator(FockBasis::full(L), h.cast<cd>());
        CMatrix ref = oracle::second_quantize(h);
        CHECK(max_abs(mine - ref) < 1e-14);
        CHECK(max_abs(number_operator(FockBasis::full(L)) - oracle::number(L)) < 1e-14);
    }
}

TEST_CASE("sector spectrum equals sums of single-particle levels") {
    const int L = 5, N = 2;
    RMatrix h = lattice::ring_hamiltonian(L, 1.0);
    Eigen::SelfAdjointEigenSolver<RMatrix> sp(h);
    std::vector<double> sums;
    for (int a = 0; a < L; ++a)
        for (int b = a + 1; b < L; ++b) sums.push_back(sp.eigenvalues()(a) + sp.eigenvalues()(b));
    std::sort(sums.begin(), sums.end());
    Eigen::SelfAdjointEigenSolver<CMatrix> mb(quadratic_operator(FockBasis::sector(L, N), h.cast<cd>()));
    REQUIRE(mb.eigenvalues().size() == static_cast<Eigen::Index>(sums.size()));
    for (std::size_t k = 0; k < sums.size(); ++k) CHECK(mb.eigenvalues()(k) == doctest::Approx(sums[k]));
}

TEST_CASE("quadratic operator rejects a wrong shape") {
    CHECK_THROWS_AS(quadratic_operator(FockBasis::full(3), CMatrix::Zero(4, 4)), ValidationError);
}
