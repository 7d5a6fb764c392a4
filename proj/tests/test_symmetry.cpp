#include "doctest.h"

#include <stdexcept>

#include <random>

#include "oracles.hpp"
#include "plaqsym/gf2.hpp"
#include "plaqsym/model.hpp"
#include "plaqsym/symmetry.hpp"

using namespace plaqsym;
using namespace plaqsym::model;
using namespace plaqsym::sym;

namespace {

Region region_of(std::vector<std::size_t> sites) { return Region{"r", std::move(sites)}; }

// all sites not in `a` for an n-site system
Region comp_of(std::size_t n, const Region& a) {
    std::vector<bool> in(n, false);
    for (auto s : a.sites) in[s] = true;
    Region c{"c", {}};
    for (std::size_t s = 0; s < n; ++s)
        if (!in[s]) c.sites.push_back(s);
    return c;
}

} // namespace

TEST_CASE("solve_symmetry_group degenerate cases") {
    auto id = gf2::BinMatrix::identity(9);
    CHECK(config_entropy(solve_symmetry_group(id)) == 0);
    gf2::BinMatrix zero(9, 9);
    auto t = solve_symmetry_group(zero);
    CHECK(config_entropy(t) == 9);
    CHECK(gf2::rank(t.t) == 9);
}

TEST_CASE("2^Scf equals exhaustive satisfying-assignment count (RTPM 4x4 torus)") {
    LatticeGeometry g{Model::RTPM, Topology::Torus, 4, 4};
    auto r = build_realization(g, {}, 0.9, 4242);
    auto p = assemble_parity_matrix(r);
    auto t = solve_symmetry_group(p);
    CHECK(oracle::count_ground_states(p) == (std::uint64_t{1} << config_entropy(t)));
}

TEST_CASE("sym_entropy trivial regions vanish") {
    LatticeGeometry g{Model::RXPM, Topology::Torus, 4, 4};
    auto t = solve_symmetry_group(assemble_parity_matrix(build_realization(g, {}, 0.6, 7)));
    Region all{"all", {}};
    for (std::size_t s = 0; s < g.sites(); ++s) all.sites.push_back(s);
    CHECK(sym_entropy(t, g, Region{"empty", {}}) == 0);
    CHECK(sym_entropy(t, g, all) == 0);
}

TEST_CASE("sym_entropy equals quotient-group oracle on small tableaus") {
    std::mt19937_64 rng(5150);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto p = oracle::random_matrix(6, 10, 600 + seed, 0.35);
        auto t = solve_symmetry_group(p);
        if (t.generators() > 12) continue;
        const std::size_t n = 10;
        // random bipartition
        Region a{"a", {}};
        for (std::size_t s = 0; s < n; ++s)
            if (rng() & 1) a.sites.push_back(s);
        Region abar = comp_of(n, a);
        const std::size_t log_ga = oracle::log_subgroup_inside(t.t, a.sites);
        const std::size_t log_gabar = oracle::log_subgroup_inside(t.t, abar.sites);
        const std::size_t expected = t.generators() - log_ga - log_gabar;
        LatticeGeometry fake{Model::RTPM, Topology::Torus, 5, 2}; // 10 sites, indexing only
        CHECK(sym_entropy(t, fake, a) == expected);
        // symmetric under A <-> complement
        CHECK(sym_entropy(t, fake, abar) == expected);
    }
}

TEST_CASE("complement identity: log|G| - log|G_D| = rank T_Dbar") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto p = oracle::random_matrix(7, 11, 900 + seed, 0.3);
        auto t = solve_symmetry_group(p);
        if (t.generators() > 12) continue;
        std::mt19937_64 rng(seed);
        Region d{"d", {}};
        for (std::size_t s = 0; s < 11; ++s)
            if (rng() & 1) d.sites.push_back(s);
        Region dbar = comp_of(11, d);
        const std::size_t log_gd = oracle::log_subgroup_inside(t.t, d.sites);
        CHECK(t.generators() - log_gd == region_rank(t, dbar));
    }
}

TEST_CASE("sym_mutual_info_cond basics") {
    LatticeGeometry g{Model::RTPM, Topology::Torus, 6, 4};
    auto t = solve_symmetry_group(assemble_parity_matrix(build_realization(g, {}, 0.85, 99)));
    auto [a, b] = antipodal_pair(g, 1);
    SUBCASE("empty B gives zero") { CHECK(sym_mutual_info_cond(t, a, Region{"b", {}}) == 0); }
    SUBCASE("overlap throws") {
        CHECK_THROWS_AS((void)sym_mutual_info_cond(t, a, a), std::invalid_argument);
    }
    SUBCASE("nonnegative and bounded") {
        const std::size_t v = sym_mutual_info_cond(t, a, b);
        CHECK(v <= region_rank(t, a));
        CHECK(v <= region_rank(t, b));
    }
}

TEST_CASE("permutation covariance leaves entropies unchanged") {
    auto p = oracle::random_matrix(6, 10, 321, 0.4);
    auto t = solve_symmetry_group(p);
    std::mt19937_64 rng(8);
    std::vector<std::size_t> perm(10);
    for (std::size_t i = 0; i < 10; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    // permuted tableau: row perm[i] of tp = row i of t
    gf2::BinMatrix tp(10, t.generators());
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < t.generators(); ++k)
            if (t.t.get(i, k)) tp.set(perm[i], k, true);
    SymmetryTableau tt{tp};
    LatticeGeometry fake{Model::RTPM, Topology::Torus, 5, 2};
    Region a{"a", {0, 2, 3, 7}};
    Region pa{"pa", {}};
    for (auto s : a.sites) pa.sites.push_back(perm[s]);
    std::sort(pa.sites.begin(), pa.sites.end());
    CHECK(sym_entropy(t, fake, a) == sym_entropy(tt, fake, pa));
}

TEST_CASE("boundary tableau and entropies") {
    LatticeGeometry g{Model::RTPM, Topology::Cylinder, 6, 5};
    auto r = build_realization(g, {Edge::Free, Edge::Fixed}, 0.8, 1234);
    auto t = solve_symmetry_group(assemble_parity_matrix(r));
    auto top = boundary_top(g);
    auto bd = boundary_tableau(t, top);

    SUBCASE("boundary = all sites gives log_g_bd = M") {
        Region all{"all", {}};
        for (std::size_t s = 0; s < g.sites(); ++s) all.sites.push_back(s);
        auto full = boundary_tableau(t, all);
        CHECK(full.log_g_bd == config_entropy(t));
    }
    SUBCASE("A = full boundary gives zero entropy") { CHECK(boundary_sym_entropy(bd, top) == 0); }
    SUBCASE("rank of boundary tableau equals span-enumeration value") {
        if (config_entropy(t) <= 12) {
            // log|G^bd| = M - (independent elements vanishing on the boundary)
            Region rest = comp_of(g.sites(), top);
            const std::size_t log_gbk = oracle::log_subgroup_inside(t.t, rest.sites);
            CHECK(bd.log_g_bd == config_entropy(t) - log_gbk);
        }
    }
    SUBCASE("boundary MI of empty B is zero") {
        auto a = boundary_segment(g, 0, 2);
        CHECK(boundary_mutual_info(bd, a, Region{"b", {}}) == 0);
    }
}

TEST_CASE("bulk-only generators give rank-0 boundary tableau") {
    // T with support strictly away from the boundary rows
    gf2::BinMatrix t(8, 2);
    t.set(3, 0, true);
    t.set(4, 0, true);
    t.set(5, 1, true);
    SymmetryTableau st{t};
    auto bd = boundary_tableau(st, Region{"bd", {0, 1, 2}});
    CHECK(bd.log_g_bd == 0);
}

TEST_CASE("top_bottom_mutual_info vanishes at p=0") {
    LatticeGeometry g{Model::RTPM, Topology::Cylinder, 5, 6};
    auto t = solve_symmetry_group(assemble_parity_matrix(build_realization(g, {}, 0.0, 3)));
    CHECK(top_bottom_mutual_info(t, boundary_top(g), boundary_bottom(g)) == 0);
}

TEST_CASE("operator_size") {
    SUBCASE("single generator of weight w gives w/N") {
        gf2::BinMatrix t(10, 1);
        t.set(2, 0, true);
        t.set(5, 0, true);
        t.set(7, 0, true);
        std::mt19937_64 rng(4);
        CHECK(operator_size(SymmetryTableau{t}, rng, 50) == doctest::Approx(0.3));
    }
    SUBCASE("two disjoint generators: exhaustive 3-element mean") {
        gf2::BinMatrix t(10, 2);
        t.set(0, 0, true); // w1 = 1
        t.set(1, 1, true);
        t.set(2, 1, true); // w2 = 2
        std::mt19937_64 rng(4);
        const double got = operator_size(SymmetryTableau{t}, rng, 20000);
        const double expect = (1.0 + 2.0 + 3.0) / 3.0 / 10.0;
        CHECK(got == doctest::Approx(expect).epsilon(0.05));
    }
    SUBCASE("trivial group throws") {
        gf2::BinMatrix t(4, 0);
        std::mt19937_64 rng(4);
        CHECK_THROWS_AS((void)operator_size(SymmetryTableau{t}, rng, 5), std::runtime_error);
    }
}

TEST_CASE("snapshot grid marks sampled operator and union support") {
    LatticeGeometry g{Model::RTPM, Topology::Torus, 4, 3};
    gf2::BinMatrix t(12, 1);
    t.set(1, 0, true);
    t.set(6, 0, true);
    SymmetryTableau st{t};
    std::mt19937_64 rng(2);
    auto sampled = gf2::random_combination(st.t, rng);
    auto lines = snapshot_grid(g, sampled, union_support(st));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == ".B..");
    CHECK(lines[1] == "..B.");
    CHECK(lines[2] == "....");
}
