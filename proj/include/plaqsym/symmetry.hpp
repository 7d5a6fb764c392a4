#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "plaqsym/gf2.hpp"
#include "plaqsym/model.hpp"

namespace plaqsym::sym {

using model::LatticeGeometry;
using model::Region;

// Nullspace basis of the parity-check matrix: rows = sites, columns =
// independent spin-flip generators. log2 |G| = generators().
struct SymmetryTableau {
    gf2::BinMatrix t;

    std::size_t sites() const { return t.rows(); }
    std::size_t generators() const { return t.cols(); }
};

SymmetryTableau solve_symmetry_group(const gf2::BinMatrix& p);

// S_cf = rank T = log2 of the ground-state degeneracy.
std::size_t config_entropy(const SymmetryTableau& t);

// rank of T restricted to the rows of a site set.
std::size_t region_rank(const SymmetryTableau& t, const Region& d);

// symS_A = rank T_A + rank T_Abar - rank T.
std::size_t sym_entropy(const SymmetryTableau& t, const LatticeGeometry& g, const Region& a);

// symI_{AB|C} = rank T_A + rank T_B - rank T_AB; A, B disjoint.
std::size_t sym_mutual_info_cond(const SymmetryTableau& t, const Region& a, const Region& b);

// T restricted to boundary rows, with the site order retained so boundary
// subregions can be restricted further. log|G^bd| = rank.
struct BoundaryTableau {
    gf2::BinMatrix t;               // |boundary| x M
    std::vector<std::size_t> sites; // ascending site ids, one per row
    std::size_t log_g_bd = 0;

    std::vector<std::size_t> rows_of(const Region& a) const;
};

BoundaryTableau boundary_tableau(const SymmetryTableau& t, const Region& boundary);

// symS_A^bd = rank T_A^bd + rank T_Abar^bd - rank T^bd with the complement
// taken inside the boundary.
std::size_t boundary_sym_entropy(const BoundaryTableau& bd, const Region& a);

// symI_AB^bd = symS_A^bd + symS_B^bd - symS_AB^bd.
std::size_t boundary_mutual_info(const BoundaryTableau& bd, const Region& a, const Region& b);

// symI between the two free boundaries: rank T_top + rank T_bot - rank T_topbot.
std::size_t top_bottom_mutual_info(const SymmetryTableau& t, const Region& top, const Region& bottom);

// Mean Hamming-weight fraction of uniformly sampled non-identity group
// elements. Throws "trivial group" when M = 0.
double operator_size(const SymmetryTableau& t, std::mt19937_64& rng, std::size_t n_samples);

// Grid snapshot: 'B' = sampled operator support, 'G' = union support of all
// generators, '.' otherwise. One line per layer.
std::vector<std::string> snapshot_grid(const LatticeGeometry& g, const gf2::BitVector& sampled,
                                       const gf2::BitVector& union_support);
gf2::BitVector union_support(const SymmetryTableau& t);

} // namespace plaqsym::sym
