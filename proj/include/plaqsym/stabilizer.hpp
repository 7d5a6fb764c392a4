#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "plaqsym/gf2.hpp"
#include "plaqsym/model.hpp"

namespace plaqsym::stab {

using gf2::BinMatrix;
using gf2::BitVector;

enum class PauliBasis : std::uint8_t { X, Y, Z };
enum class Patch : std::uint8_t { Open, Cylinder, Torus };

// Sign-carrying Pauli string in the Hermitian convention
// P = (-1)^sign prod_j i^{x_j z_j} X_j^{x_j} Z_j^{z_j}.
struct PauliString {
    BitVector x, z;
    std::uint8_t sign = 0;

    static PauliString single(std::size_t n, std::size_t site, PauliBasis b);
};

// N-qubit stabilizer group: binary symplectic generator rows plus sign bits.
// Pure states carry exactly n independent, mutually commuting generators.
struct StabilizerTableau {
    std::size_t n = 0;
    BinMatrix x, z;                  // generators x n
    std::vector<std::uint8_t> sign;  // one bit per generator

    std::size_t generators() const { return x.rows(); }
    PauliString row(std::size_t j) const;
    void set_row(std::size_t j, const PauliString& p);
};

// Square-lattice cluster state g_i = X_i prod_{j in N_i} Z_j. The cylinder is
// periodic horizontally and open vertically; qubit (i, j) -> j*lx + i.
StabilizerTableau build_cluster_state(std::size_t lx, std::size_t ly, Patch patch);

// Symplectic inner product (0 commute / 1 anticommute).
bool anticommute(const PauliString& a, const PauliString& b);

// In-place product a <- a*b with exact phase bookkeeping; throws if the
// product picks up an imaginary phase (the factors anticommute).
void multiply_into(PauliString& a, const PauliString& b);

// P_ij = 1 iff observable i anticommutes with generator j.
BinMatrix commutator_matrix(const StabilizerTableau& t, const std::vector<PauliString>& observables);

// Projective measurement of a Pauli observable; returns the outcome bit
// (0 -> +1 eigenvalue). Random outcomes consume one rng draw; deterministic
// outcomes leave the state unchanged.
int measure(StabilizerTableau& t, const PauliString& o, std::mt19937_64& rng);

// Bulk measurement pattern matched to a disorder realization:
// plaquette term <-> Y, single-site term <-> Z, in ascending site order.
struct MeasurementPattern {
    std::vector<std::pair<std::size_t, PauliBasis>> ops;
};
MeasurementPattern pattern_from_realization(const model::DisorderRealization& r);
std::vector<PauliString> observables_of(const MeasurementPattern& pat, std::size_t n);

void measure_all(StabilizerTableau& t, const MeasurementPattern& pat, std::mt19937_64& rng);

// 2*S_A = rank G_A + rank G_Abar - n for a pure stabilizer state.
std::size_t entropy2(const StabilizerTableau& t, std::span<const std::size_t> region);

// Eq.-level cross-check of the measured cluster state against the plaquette
// model on one matched realization: the commutator matrix must equal the
// parity-check matrix bit for bit, and every contiguous top-boundary interval
// must satisfy |S_A - symS_A^bd / 2| <= l_A.
struct EquivalenceReport {
    bool parity_match = false;
    std::size_t intervals = 0;
    std::size_t violations = 0;
    int max_two_sided_gap = 0; // max |2 S_A - symS_A^bd| - 2 l_A over intervals
};
EquivalenceReport check_equivalence(const model::DisorderRealization& r, std::uint64_t outcome_seed);

} // namespace plaqsym::stab
