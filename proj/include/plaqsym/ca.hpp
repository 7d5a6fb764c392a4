#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plaqsym/gf2.hpp"
#include "plaqsym/model.hpp"

namespace plaqsym::ca {

using gf2::BinMatrix;
using gf2::BitVector;
using model::LatticeGeometry;
using model::Model;

// Boundary symmetry generators evolving layer by layer. RTPM generators carry
// one layer of state, RXPM generators two (second-order rule). `tag` is the
// generator's row of the initial tableau T0 and is XORed along with the state
// when generators recombine.
struct CaGeneratorState {
    struct Gen {
        BitVector tag;
        BitVector prev; // x^{tau-1}, RXPM only
        BitVector cur;  // x^{tau}
        std::vector<BitVector> history; // per-layer support, when recording
    };

    Model model = Model::RTPM;
    std::size_t width = 0;
    std::size_t layer = 0; // tau of `cur`
    bool record = false;
    std::vector<Gen> gens;
    std::vector<std::pair<std::size_t, std::size_t>> impurities; // (site, layer)
};

// T0 = I_L for RTPM (one free layer); T0 = I_2L for RXPM (free spins on the
// first two layers).
CaGeneratorState ca_initial_state(Model m, std::size_t width, bool record = false);

// One PCA layer: x'_i = x_i + x_{i+1} where plaq_mask is set, 0 elsewhere.
// The same disorder layer applies to every generator.
void pca_step_rtpm(CaGeneratorState& st, const BitVector& plaq_mask);

// One CAwRI layer with plaquette centers at the current layer. Impurity sites
// (mask bit 0) are processed in ascending site order: generators violating
// x^tau_i = 0 recombine with the first violator, which is removed; a fresh
// single-site generator appears on the next layer. Then
// x'_i = x_{i-1} + x_i + x_{i+1} + prev_i at plaquette centers.
void cawri_step_rxpm(CaGeneratorState& st, const BitVector& plaq_mask);

// (T0 | Ttau) of the boundary group after evolving the full cylinder height.
// fixed_cols trailing columns of t_tau form the final layer, the block pinned
// by a fixed bottom boundary.
struct DynamicBoundaryTableau {
    BinMatrix t0;
    BinMatrix t_tau;
    std::size_t fixed_cols = 0;
};

struct CaRunResult {
    DynamicBoundaryTableau tableau;
    std::size_t n_impurities = 0;
    std::size_t n_generators = 0;            // before the final elimination
    std::vector<std::string> snapshot;       // when requested
};

struct CaOptions {
    bool record_snapshot = false;
    std::uint64_t snapshot_rng_seed = 1;
};

// Evolves the free-top cylinder of the given height and returns the reduced
// (T0 | Ttau) tableau. Disorder is sampled with the same per-site hash as
// build_realization, so a static solve of the identical realization gives the
// same boundary group.
CaRunResult run_dynamics(Model m, std::size_t width, std::size_t height, double p, std::uint64_t seed,
                         const CaOptions& opts = {});

// Q1 block: initial-boundary supports of the generators vanishing on the
// final (pinned) layer.
BinMatrix apply_fixed_boundary(const DynamicBoundaryTableau& dt);

// rank T0 + rank Ttau - rank (T0|Ttau): generators connecting both free ends.
std::size_t dynamic_top_bottom_mi(const DynamicBoundaryTableau& dt);

// rank(A) + rank(complement) - rank(m) for a column subset of a generator
// matrix (rows = generators).
std::size_t block_entropy(const BinMatrix& m, std::span<const std::size_t> cols_a);

// Column indices of the top-boundary arc [x1,x2) inside t0 (or inside Q1).
std::vector<std::size_t> top_segment_cols(Model m, std::size_t width, std::size_t x1, std::size_t x2);

} // namespace plaqsym::ca
