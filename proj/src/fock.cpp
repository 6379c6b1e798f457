#include "decoheat/fock.hpp"

#include "decoheat/errors.hpp"

#include <bit>
#include <string>

namespace decoheat::fock {

namespace {

constexpr int kMaxSites = 24;

void check_sites(int sites) {
    if (sites < 1 || sites > kMaxSites)
        throw DomainError("fock: number of sites must be in [1, " + std::to_string(kMaxSites) +
                          "], got " + std::to_string(sites));
}

} // namespace

FockBasis::FockBasis(int sites, std::vector<State> states)
    : sites_(sites), states_(std::move(states)) {
    index_.reserve(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k)
        index_.emplace(states_[k], static_cast<Eigen::Index>(k));
}

FockBasis FockBasis::full(int sites) {
    check_sites(sites);
    std::vector<State> states(std::size_t{1} << sites);
    for (std::size_t k = 0; k < states.size(); ++k) states[k] = static_cast<State>(k);
    return FockBasis(sites, std::move(states));
}

FockBasis FockBasis::sector(int sites, int particles) {
    check_sites(sites);
    if (particles < 0 || particles > sites)
        throw DomainError("fock: particle number " + std::to_string(particles) +
                          " outside [0, " + std::to_string(sites) + "]");
    std::vector<State> states;
    for (State s = 0; s < (State{1} << sites); ++s)
        if (std::popcount(s) == particles) states.push_back(s);
    return FockBasis(sites, std::move(states));
}

std::optional<Eigen::Index> FockBasis::index_of(State s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<HopResult> apply_hop(State s, int i, int j) {
    const State bi = State{1} << i;
    const State bj = State{1} << j;
    if (i == j) {
        if (!(s & bi)) return std::nullopt;
        return HopResult{s, 1};
    }
    if (!(s & bj) || (s & bi)) return std::nullopt;
    // c_j: sign from occupied modes below j; then c†_i on the updated state.
    const State below_j = bj - 1;
    int parity = std::popcount(s & below_j);
    const State t = s ^ bj;
    const State below_i = bi - 1;
    parity += std::popcount(t & below_i);
    return HopResult{t | bi, (parity % 2 == 0) ? 1 : -1};
}

CMatrix quadratic_operator(const FockBasis& basis, const CMatrix& h) {
    const int L = basis.sites();
    if (h.rows() != L || h.cols() != L)
        throw ValidationError("fock: single-particle operator must be " + std::to_string(L) + "x" +
                              std::to_string(L));
    const Eigen::Index dim = basis.dim();
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const State s = basis.states()[static_cast<std::size_t>(col)];
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j) {
                if (h(i, j) == cd{0.0, 0.0}) continue;
                auto hop = apply_hop(s, i, j);
                if (!hop) continue;
                auto row = basis.index_of(hop->state);
                if (!row) throw ValidationError("fock: basis not closed under hopping");
                out(*row, col) += static_cast<double>(hop->sign) * h(i, j);
            }
        }
    }
    return out;
}

CMatrix number_operator(const FockBasis& basis) {
    const Eigen::Index dim = basis.dim();
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        out(k, k) = static_cast<double>(std::popcount(basis.states()[static_cast<std::size_t>(k)]));
    return out;
}

} // namespace decoheat::fock
