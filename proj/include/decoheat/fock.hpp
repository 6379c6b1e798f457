// fock.hpp: many-body fermionic Fock spaces for small lattices
//
// Convention: site j (1-based) is bit j-1 of the occupation word; creation
// operators are ordered lowest bit first, so c†_j picks up the sign
// (-1)^(number of occupied sites below j).

#pragma once

#include "decoheat/linalg.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace decoheat::fock {

using State = std::uint32_t;

class FockBasis {
public:
    // Full Fock space of `sites` modes (dimension 2^sites).
    static FockBasis full(int sites);
    // Fixed-particle-number sector.
    static FockBasis sector(int sites, int particles);

    int sites() const { return sites_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
    const std::vector<State>& states() const { return states_; }
    std::optional<Eigen::Index> index_of(State s) const;

private:
    FockBasis(int sites, std::vector<State> states);

    int sites_{0};
    std::vector<State> states_;
    std::unordered_map<State, Eigen::Index> index_;
};

// Jordan-Wigner sign and result of c†_i c_j acting on `s` (0-based modes).
// Returns nullopt when the action annihilates the state.
struct HopResult {
    State state;
    int sign;
};
std::optional<HopResult> apply_hop(State s, int i, int j);

// Second-quantized Σ_ij h_ij c†_i c_j on the given basis. The basis must be
// closed under particle-number-conserving hops (full space or a sector).
CMatrix quadratic_operator(const FockBasis& basis, const CMatrix& single_particle);

// Total particle number N̂ (diagonal).
CMatrix number_operator(const FockBasis& basis);

} // namespace decoheat::fock
