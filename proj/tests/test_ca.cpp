#include "doctest.h"

#include <stdexcept>

#include <random>

#include "oracles.hpp"
#include "plaqsym/ca.hpp"
#include "plaqsym/gf2.hpp"
#include "plaqsym/model.hpp"
#include "plaqsym/symmetry.hpp"

using namespace plaqsym;
using namespace plaqsym::model;
using namespace plaqsym::ca;
using gf2::BinMatrix;
using gf2::BitVector;

namespace {

BitVector full_mask(std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i);
    return v;
}

std::size_t ones_in_binary(std::size_t x) {
    std::size_t c = 0;
    while (x) {
        c += x & 1;
        x >>= 1;
    }
    return c;
}

} // namespace

TEST_CASE("rule 18 from a single seed reproduces binomial parity") {
    const std::size_t L = 192;
    const std::size_t i0 = 150;
    auto st = ca_initial_state(Model::RTPM, L);
    // keep only the seed generator
    st.gens = {st.gens[i0]};
    auto mask = full_mask(L);
    for (std::size_t tau = 1; tau <= 64; ++tau) {
        pca_step_rtpm(st, mask);
        const auto& row = st.gens[0].cur;
        CHECK(row.popcount() == (std::size_t{1} << ones_in_binary(tau)));
        // support is exactly the odd binomials C(tau, i0 - i)
        for (std::size_t i = 0; i < L; ++i) {
            const bool in_range = i <= i0 && i0 - i <= tau;
            bool odd = false;
            if (in_range) {
                // Lucas: C(tau, k) odd iff k is a submask of tau
                const std::size_t k = i0 - i;
                odd = (k & ~tau) == 0;
            }
            CHECK(row.get(i) == odd);
        }
    }
}

TEST_CASE("PCA p=0 layer wipes any state") {
    const std::size_t L = 9;
    auto st = ca_initial_state(Model::RTPM, L);
    pca_step_rtpm(st, BitVector(L)); // all single-site
    for (const auto& g : st.gens) CHECK_FALSE(g.cur.any());
}

TEST_CASE("PCA linearity: two adjacent seeds give XOR of shifted patterns") {
    const std::size_t L = 160;
    auto a = ca_initial_state(Model::RTPM, L);
    a.gens = {a.gens[100]};
    auto b = ca_initial_state(Model::RTPM, L);
    b.gens = {b.gens[101]};
    auto both = ca_initial_state(Model::RTPM, L);
    both.gens = {both.gens[100]};
    both.gens[0].cur.set(101);
    auto mask = full_mask(L);
    for (int step = 0; step < 40; ++step) {
        pca_step_rtpm(a, mask);
        pca_step_rtpm(b, mask);
        pca_step_rtpm(both, mask);
        BitVector x = a.gens[0].cur;
        x.xor_with(b.gens[0].cur);
        CHECK(x == both.gens[0].cur);
    }
}

TEST_CASE("CAwRI p=1 is reversible") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t L = 5 + rng() % 60;
        const std::size_t steps = 1 + rng() % 64;
        BitVector prev(L), cur(L);
        for (std::size_t i = 0; i < L; ++i) {
            if (rng() & 1) prev.set(i);
            if (rng() & 1) cur.set(i);
        }
        auto st = ca_initial_state(Model::RXPM, L);
        st.gens = {CaGeneratorState::Gen{BitVector(2 * L), prev, cur, {}}};
        auto mask = full_mask(L);
        for (std::size_t s = 0; s < steps; ++s) cawri_step_rxpm(st, mask);
        // invert: x^{tau-1} = x^{tau+1} + x^tau_{i-1} + x^tau_i + x^tau_{i+1}
        BitVector p2 = st.gens[0].prev, c2 = st.gens[0].cur;
        for (std::size_t s = 0; s < steps; ++s) {
            BitVector back = c2;
            back.xor_with(p2);
            back.xor_with(p2.rotated_up());
            back.xor_with(p2.rotated_down());
            c2 = p2;
            p2 = back;
        }
        CHECK(p2 == prev);
        CHECK(c2 == cur);
    }
}

TEST_CASE("CAwRI impurity leaves satisfied generators alone") {
    const std::size_t L = 6;
    auto st = ca_initial_state(Model::RXPM, L);
    // generator with x^tau_2 = 0 stays identical under an impurity at 2
    BitVector mask = full_mask(L);
    mask.set(2, false);
    auto before = st.gens[L + 0]; // X_{0,1}: cur = e_0, zero at site 2
    cawri_step_rxpm(st, mask);
    // the original generator evolved by the plain rule away from site 2;
    // its tag must be untouched by recombination
    bool found = false;
    for (const auto& g : st.gens)
        if (g.tag == before.tag) found = true;
    CHECK(found);
    // a fresh generator exists on the new layer at site 2
    bool fresh = false;
    for (const auto& g : st.gens)
        if (!g.tag.any() && g.cur == BitVector::unit(L, 2) && !g.prev.any()) fresh = true;
    CHECK(fresh);
}

TEST_CASE("CAwRI impurity bookkeeping: generator count change") {
    std::mt19937_64 rng(77);
    const std::size_t L = 8;
    auto st = ca_initial_state(Model::RXPM, L);
    BitVector mask = full_mask(L);
    mask.set(3, false);
    // some generator has support at 3 on the current layer (X_{3,1})
    const std::size_t before = st.gens.size();
    cawri_step_rxpm(st, mask);
    CHECK(st.gens.size() == before); // -1 removed, +1 fresh
    CHECK(st.impurities.size() == 1);
    // all survivors vanish on the consumed impurity layer column
    // (enforced at recombination time; fresh one lives on the next layer)
}

TEST_CASE("static and dynamic boundary groups agree realization by realization") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 24; ++trial) {
        const bool rx = trial % 2;
        const Model m = rx ? Model::RXPM : Model::RTPM;
        const std::size_t L = 3 + rng() % 5;
        const std::size_t Lt = (rx ? 4 : 3) + rng() % 4;
        const double p = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
        const std::uint64_t seed = rng();
        LatticeGeometry g{m, Topology::Cylinder, L, Lt};

        auto res = run_dynamics(m, L, Lt, p, seed);

        // free-free static solve
        auto r_free = build_realization(g, {Edge::Free, Edge::Free}, p, seed);
        auto t_free = sym::solve_symmetry_group(assemble_parity_matrix(r_free));
        const auto top = boundary_top(g);
        const auto bot = boundary_bottom(g);

        // top-bottom symI
        CHECK(dynamic_top_bottom_mi(res.tableau) == sym::top_bottom_mutual_info(t_free, top, bot));

        // full boundary group size
        Region both{"bd", {}};
        std::set_union(top.sites.begin(), top.sites.end(), bot.sites.begin(), bot.sites.end(),
                       std::back_inserter(both.sites));
        auto bd_static = sym::boundary_tableau(t_free, both);
        CHECK(gf2::rank(gf2::hstack(res.tableau.t0, res.tableau.t_tau)) == bd_static.log_g_bd);

        // fixed-bottom: Q1 vs static boundary tableau on the free top
        auto r_fix = build_realization(g, {Edge::Free, Edge::Fixed}, p, seed);
        auto t_fix = sym::solve_symmetry_group(assemble_parity_matrix(r_fix));
        auto bd_fix = sym::boundary_tableau(t_fix, top);
        auto q1 = apply_fixed_boundary(res.tableau);
        CHECK(gf2::rank(q1) == bd_fix.log_g_bd);

        // segment entropies on the free top boundary, all contiguous arcs
        for (std::size_t x1 = 0; x1 < L; ++x1)
            for (std::size_t len = 1; len < L; ++len) {
                if (x1 + len > L) continue;
                auto seg = boundary_segment(g, x1, x1 + len);
                auto cols = top_segment_cols(m, L, x1, x1 + len);
                CHECK(block_entropy(q1, cols) == sym::boundary_sym_entropy(bd_fix, seg));
            }
    }
}

TEST_CASE("run_dynamics p=0 leaves a trivial connected group") {
    auto res = run_dynamics(Model::RTPM, 6, 8, 0.0, 5);
    CHECK(dynamic_top_bottom_mi(res.tableau) == 0);
    auto resx = run_dynamics(Model::RXPM, 6, 8, 0.0, 5);
    CHECK(dynamic_top_bottom_mi(resx.tableau) == 0);
}

TEST_CASE("apply_fixed_boundary degenerate cases") {
    SUBCASE("zero final block keeps the full row space") {
        DynamicBoundaryTableau dt;
        dt.t0 = BinMatrix::identity(4);
        dt.t_tau = BinMatrix(4, 4);
        dt.fixed_cols = 4;
        auto q1 = apply_fixed_boundary(dt);
        CHECK(gf2::rank(q1) == 4);
    }
    SUBCASE("full-rank final block leaves nothing") {
        DynamicBoundaryTableau dt;
        dt.t0 = BinMatrix::identity(4);
        dt.t_tau = BinMatrix::identity(4);
        dt.fixed_cols = 4;
        auto q1 = apply_fixed_boundary(dt);
        CHECK(q1.rows() == 0);
    }
}

TEST_CASE("snapshot has expected dimensions and charset") {
    CaOptions opts;
    opts.record_snapshot = true;
    auto res = run_dynamics(Model::RXPM, 12, 16, 0.8, 99, opts);
    REQUIRE(res.snapshot.size() == 16);
    for (const auto& line : res.snapshot) {
        REQUIRE(line.size() == 12);
        for (char c : line) CHECK((c == '.' || c == 'B' || c == 'O' || c == 'G'));
    }
}
