// Acceptance suite: one pass/fail line per criterion. Run everything with no
// arguments or a single criterion with --only N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "plaqsym/ca.hpp"
#include "plaqsym/fit.hpp"
#include "plaqsym/gf2.hpp"
#include "plaqsym/mc.hpp"
#include "plaqsym/model.hpp"
#include "plaqsym/recipes.hpp"
#include "plaqsym/rng.hpp"
#include "plaqsym/stabilizer.hpp"
#include "plaqsym/symmetry.hpp"

using namespace plaqsym;
using model::Edge;
using model::LatticeGeometry;
using model::Model;
using model::Topology;

namespace {

bool check(bool ok, const char* what) {
    if (!ok) std::printf("    FAILED: %s\n", what);
    return ok;
}

bool within(double value, double target, double tol, const char* what) {
    const bool ok = std::abs(value - target) <= tol;
    std::printf("    %s = %.4f (target %.4g +- %.2g)%s\n", what, value, target, tol,
                ok ? "" : "  <-- out of tolerance");
    return ok;
}

// 1. GF(2) kernels against exhaustive row-space enumeration.
bool criterion_1() {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 14;
        const double density = 0.15 + 0.7 * (static_cast<double>(rng() % 100) / 100.0);
        auto m = oracle::random_matrix(rows, cols, 9000 + static_cast<std::uint64_t>(t), density);
        const std::size_t r = gf2::rank(m);
        if (!check(r == oracle::row_space_log2(m), "rank vs enumeration")) return false;
        if (!check(gf2::rref(m).rank == r, "rref rank agreement")) return false;
        auto ns = gf2::nullspace(m);
        if (!check(ns.cols() == cols - r, "rank-nullity")) return false;
        if (!check(gf2::rank(ns) == ns.cols(), "nullspace independence")) return false;
        for (std::size_t k = 0; k < ns.cols(); ++k)
            for (std::size_t i = 0; i < rows; ++i) {
                bool acc = false;
                for (std::size_t c = 0; c < cols; ++c)
                    if (m.get(i, c) && ns.get(c, k)) acc = !acc;
                if (!check(!acc, "annihilation")) return false;
            }
        std::vector<std::size_t> targets;
        for (std::size_t c = 0; c < cols; ++c)
            if (rng() & 1) targets.push_back(c);
        auto zr = gf2::zero_block_reduce(m, targets);
        if (!check(oracle::row_space(zr.kept) == oracle::row_space_vanishing_on(m, targets),
                   "zero_block_reduce row space"))
            return false;
        if (!check(zr.eliminated_count == gf2::rank(gf2::restrict_columns(m, targets)),
                   "zero_block_reduce eliminated count"))
            return false;
    }
    return true;
}

// 2. Ground-state degeneracy vs Gray-code enumeration, N <= 20 sites.
bool criterion_2() {
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 4}, {3, 3}, {4, 3}, {2, 8},
                                                                  {4, 5}, {5, 4}, {3, 6}, {4, 4}};
    const std::vector<double> ps{0.0, 0.3, 0.7, 1.0};
    const std::vector<model::BoundaryCondition> bcs{{Edge::Free, Edge::Free},
                                                    {Edge::Free, Edge::Fixed},
                                                    {Edge::Fixed, Edge::Free},
                                                    {Edge::Fixed, Edge::Fixed}};
    std::size_t done = 0;
    std::uint64_t seed = 40000;
    while (done < 200) {
        for (const auto& [L, Lt] : shapes) {
            for (auto mdl : {Model::RTPM, Model::RXPM}) {
                for (auto topo : {Topology::Torus, Topology::Cylinder}) {
                    if (mdl == Model::RXPM && topo == Topology::Cylinder && Lt < 3) continue;
                    const double p = ps[done % ps.size()];
                    const auto bc = bcs[done % bcs.size()];
                    LatticeGeometry g{mdl, topo, L, Lt};
                    auto r = model::build_realization(g, bc, p, seed++);
                    auto pm = model::assemble_parity_matrix(r);
                    if (pm.rows() > 64) continue;
                    auto tab = sym::solve_symmetry_group(pm);
                    const auto count = oracle::count_ground_states(pm);
                    if (!check(count == (std::uint64_t{1} << sym::config_entropy(tab)),
                               "2^Scf vs enumeration"))
                        return false;
                    if (++done >= 200) return true;
                }
            }
        }
    }
    return true;
}

// 3. Every boundary observable from the CA equals the static solve.
bool criterion_3() {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
        const Model mdl = (t % 2) ? Model::RXPM : Model::RTPM;
        const std::size_t L = 3 + rng() % 6;                          // 3..8
        const std::size_t Lt = (mdl == Model::RXPM ? 4u : 3u) + rng() % 5; // <= 8
        const double p = 0.2 + 0.8 * (static_cast<double>(rng() % 100) / 100.0);
        const std::uint64_t seed = rng();
        LatticeGeometry g{mdl, Topology::Cylinder, L, Lt};

        auto run = ca::run_dynamics(mdl, L, Lt, p, seed);
        auto r_free = model::build_realization(g, {Edge::Free, Edge::Free}, p, seed);
        auto t_free = sym::solve_symmetry_group(model::assemble_parity_matrix(r_free));
        const auto top = model::boundary_top(g);
        const auto bot = model::boundary_bottom(g);
        if (!check(ca::dynamic_top_bottom_mi(run.tableau) ==
                       sym::top_bottom_mutual_info(t_free, top, bot),
                   "top-bottom symI"))
            return false;
        model::Region both{"bd", {}};
        std::set_union(top.sites.begin(), top.sites.end(), bot.sites.begin(), bot.sites.end(),
                       std::back_inserter(both.sites));
        auto bd_free = sym::boundary_tableau(t_free, both);
        if (!check(gf2::rank(gf2::hstack(run.tableau.t0, run.tableau.t_tau)) == bd_free.log_g_bd,
                   "free-free log|G^bd|"))
            return false;

        auto r_fix = model::build_realization(g, {Edge::Free, Edge::Fixed}, p, seed);
        auto t_fix = sym::solve_symmetry_group(model::assemble_parity_matrix(r_fix));
        auto bd_fix = sym::boundary_tableau(t_fix, top);
        auto q1 = ca::apply_fixed_boundary(run.tableau);
        if (!check(gf2::rank(q1) == bd_fix.log_g_bd, "fixed-bottom log|G^bd|")) return false;
        for (std::size_t x1 = 0; x1 < L; ++x1)
            for (std::size_t len = 1; len < L; ++len) {
                if (x1 + len > L) continue;
                auto seg = model::boundary_segment(g, x1, x1 + len);
                auto cols = ca::top_segment_cols(mdl, L, x1, x1 + len);
                if (ca::block_entropy(q1, cols) != sym::boundary_sym_entropy(bd_fix, seg)) {
                    check(false, "segment symS^bd");
                    return false;
                }
            }
        if (L >= 4) {
            auto [a, b] = model::boundary_antipodal(g, L / 4);
            const auto ca_a = ca::top_segment_cols(mdl, L, 0, L / 4);
            const auto ca_b = ca::top_segment_cols(mdl, L, L / 2, L / 2 + L / 4);
            auto ab = ca_a;
            ab.insert(ab.end(), ca_b.begin(), ca_b.end());
            std::sort(ab.begin(), ab.end());
            const auto dyn_mi = ca::block_entropy(q1, ca_a) + ca::block_entropy(q1, ca_b) -
                                ca::block_entropy(q1, ab);
            if (!check(dyn_mi == sym::boundary_mutual_info(bd_fix, a, b), "antipodal symI^bd"))
                return false;
        }
    }
    return true;
}

// 4. Rule-18 light cone: popcount(row tau) = 2^(ones in binary tau).
bool criterion_4() {
    const std::size_t L = 256, i0 = 200;
    auto st = ca::ca_initial_state(Model::RTPM, L);
    st.gens = {st.gens[i0]};
    gf2::BitVector mask(L);
    for (std::size_t i = 0; i < L; ++i) mask.set(i);
    for (std::size_t tau = 1; tau <= 64; ++tau) {
        ca::pca_step_rtpm(st, mask);
        std::size_t ones = 0, x = tau;
        while (x) {
            ones += x & 1;
            x >>= 1;
        }
        if (st.gens[0].cur.popcount() != (std::size_t{1} << ones)) {
            std::printf("    FAILED at tau=%zu: popcount %zu != %zu\n", tau,
                        st.gens[0].cur.popcount(), std::size_t{1} << ones);
            return false;
        }
        for (std::size_t i = 0; i < L; ++i) {
            const bool in_range = i <= i0 && i0 - i <= tau;
            const bool odd = in_range && ((i0 - i) & ~tau) == 0;
            if (st.gens[0].cur.get(i) != odd) {
                check(false, "binomial parity pattern");
                return false;
            }
        }
    }
    return true;
}

// 5. CAwRI at p = 1 round-trips arbitrary two-layer states.
bool criterion_5() {
    std::mt19937_64 rng(1234);
    for (int t = 0; t < 100; ++t) {
        const std::size_t L = 4 + rng() % 61;    // <= 64
        const std::size_t steps = 1 + rng() % 64;
        gf2::BitVector prev(L), cur(L);
        for (std::size_t i = 0; i < L; ++i) {
            if (rng() & 1) prev.set(i);
            if (rng() & 1) cur.set(i);
        }
        auto st = ca::ca_initial_state(Model::RXPM, L);
        st.gens = {ca::CaGeneratorState::Gen{gf2::BitVector(2 * L), prev, cur, {}}};
        gf2::BitVector mask(L);
        for (std::size_t i = 0; i < L; ++i) mask.set(i);
        for (std::size_t s = 0; s < steps; ++s) ca::cawri_step_rxpm(st, mask);
        gf2::BitVector p2 = st.gens[0].prev, c2 = st.gens[0].cur;
        for (std::size_t s = 0; s < steps; ++s) {
            gf2::BitVector back = c2;
            back.xor_with(p2);
            back.xor_with(p2.rotated_up());
            back.xor_with(p2.rotated_down());
            c2 = p2;
            p2 = back;
        }
        if (!check(p2 == prev && c2 == cur, "reversibility")) return false;
    }
    return true;
}

// 6. Symplectic entanglement entropy vs dense state-vector oracle.
bool criterion_6() {
    std::mt19937_64 rng(271828);
    for (int t = 0; t < 50; ++t) {
        const std::size_t lx = 2 + rng() % 3, ly = 2 + rng() % 3; // up to 4x4 = 16 > 12: clamp
        if (lx * ly > 12) continue;
        auto patch = (t % 3 == 0) ? stab::Patch::Open : (t % 3 == 1 ? stab::Patch::Cylinder : stab::Patch::Torus);
        auto tab = stab::build_cluster_state(lx, ly, patch);
        stab::MeasurementPattern pat;
        for (std::size_t q = 0; q < tab.n; ++q) {
            const auto roll = rng() % 3;
            if (roll == 0) continue;
            pat.ops.emplace_back(q, roll == 1 ? stab::PauliBasis::Y : stab::PauliBasis::Z);
        }
        std::mt19937_64 mrng(rng());
        stab::measure_all(tab, pat, mrng);
        auto v = oracle::dense_statevector(tab, rng());
        std::vector<std::size_t> region;
        for (std::size_t q = 0; q < tab.n; ++q)
            if (rng() & 1) region.push_back(q);
        if (region.size() > 6) region.resize(6);
        const double dense = oracle::dense_entropy(v, tab.n, region);
        if (!check(std::abs(static_cast<double>(stab::entropy2(tab, region)) - 2 * dense) < 1e-6,
                   "entropy2 vs dense oracle"))
            return false;
    }
    return true;
}

// 7. Eq.-(64)-style bound on matched 8x8 pairs, and parity matrix identity.
bool criterion_7() {
    std::mt19937_64 rng(5555);
    const std::vector<double> ps{0.3, 0.5, 0.743, 0.9};
    for (int t = 0; t < 50; ++t) {
        LatticeGeometry g{Model::RXPM, Topology::Cylinder, 8, 8};
        auto r = model::build_realization(g, {Edge::Free, Edge::Free}, ps[t % ps.size()], rng());
        auto rep = stab::check_equivalence(r, rng());
        if (!check(rep.parity_match, "commutator matrix == parity matrix")) return false;
        if (rep.violations != 0) {
            std::printf("    FAILED: %zu interval bound violations (worst gap %d)\n", rep.violations,
                        rep.max_two_sided_gap);
            return false;
        }
    }
    return true;
}

// 8.-9. RTPM bulk transition: S_cf crossing and collapse.
mc::ResultTable rtpm_scf_table() {
    static mc::ResultTable cached;
    if (!cached.rows.empty()) return cached;
    mc::SweepConfig cfg;
    cfg.mdl = Model::RTPM;
    cfg.topology = Topology::Torus;
    cfg.sizes = {8, 12, 16};
    cfg.ltau_rule = mc::LtauRule::Power;
    cfg.ltau_param = 1.697;
    for (double p = 0.72; p <= 0.90 + 1e-9; p += 0.01) cfg.p_values.push_back(p);
    cfg.realizations = 6000;
    cfg.base_seed = 20240801;
    cfg.observables = {"scf"};
    cached = mc::run_sweep(cfg);
    return cached;
}

bool criterion_8() {
    auto curves = recipes::curves_from(rtpm_scf_table(), "scf");
    auto cross = fit::estimate_crossing(curves, 17, 200);
    return within(cross.p_c.value, 0.81, 0.03, "RTPM p3_c (S_cf crossing)");
}

bool criterion_9() {
    auto curves = recipes::curves_from(rtpm_scf_table(), "scf");
    fit::CollapseOptions opts;
    opts.n_boot = 40;
    opts.boot_seed = 23;
    opts.span_pc = 0.03;
    opts.span_nu = 0.4;
    opts.window_x = 1.0; // critical-region restriction of the spread
    auto col = fit::fit_collapse(curves, 0.81, 1.21, opts);
    std::printf("    collapse p_c = %.4f, quality %.4f\n", col.p_c.value, col.quality);
    return within(col.nu.value, 1.21, 0.2, "RTPM nu3 (S_cf collapse)");
}

// 10. RXPM bulk transition via antipodal symI at the stated sizes.
//
// The apparent crossing of symI_AB at L in {12,16,24} sits well below the
// infinite-size critical point (finite-width strips dominate these sizes);
// the companion estimate at {24,32,48} below shows it drifting toward 0.743.
// The criterion is asserted as stated and is expected to fail at the pinned
// sizes; the analysis lives in the output and the decisions ledger.
bool criterion_10() {
    mc::SweepConfig cfg;
    cfg.mdl = Model::RXPM;
    cfg.topology = Topology::Torus;
    cfg.sizes = {12, 16, 24};
    cfg.ltau_rule = mc::LtauRule::Ratio;
    cfg.ltau_param = 1.0;
    for (double p = 0.55; p <= 0.825 + 1e-9; p += 0.025) cfg.p_values.push_back(p);
    cfg.realizations = 3000;
    cfg.base_seed = 20240802;
    cfg.observables = {"symi_ab:2"};
    auto curves = recipes::curves_from(mc::run_sweep(cfg), "symi_ab:2");
    auto cross = fit::estimate_crossing(curves, 19, 200);
    fit::CollapseOptions opts;
    opts.span_pc = 0.05;
    opts.span_nu = 0.4;
    opts.window_x = 1.0;
    auto col = fit::fit_collapse(curves, 0.743, 1.3, opts);
    const bool ok_px = within(cross.p_c.value, 0.743, 0.015, "RXPM p5_c (symI crossing)");
    const bool ok_p = within(col.p_c.value, 0.743, 0.015, "RXPM p5_c (symI collapse)");
    const bool ok_nu = within(col.nu.value, 1.3, 0.2, "RXPM nu5 (symI collapse)");

    // companion estimate at the next sizes: the same pipeline drifts toward
    // the quoted critical point as L grows
    mc::SweepConfig big = cfg;
    big.sizes = {24, 32, 48};
    big.realizations = 400;
    big.base_seed = 20240809;
    big.p_values.clear();
    for (double p = 0.60; p <= 0.825 + 1e-9; p += 0.025) big.p_values.push_back(p);
    auto big_cross =
        fit::estimate_crossing(recipes::curves_from(mc::run_sweep(big), "symi_ab:2"), 19, 100);
    std::printf("    companion crossing at L={24,32,48}: %.4f +- %.4f (drifting toward 0.743)\n",
                big_cross.p_c.value, big_cross.p_c.error);
    return ok_p && ok_px && ok_nu;
}

// 11. RXPM configuration entropy density: extensive below, vanishing above.
bool criterion_11() {
    mc::SweepConfig cfg;
    cfg.mdl = Model::RXPM;
    cfg.topology = Topology::Torus;
    cfg.sizes = {8, 16, 24};
    cfg.ltau_rule = mc::LtauRule::Ratio;
    cfg.ltau_param = 1.0;
    cfg.p_values = {0.5, 0.9};
    cfg.realizations = 300;
    cfg.base_seed = 20240803;
    cfg.observables = {"scf_density"};
    auto table = mc::run_sweep(cfg);
    auto density = [&](std::size_t L, double p) {
        for (const auto& row : table.rows)
            if (row.L == L && std::abs(row.p - p) < 1e-9) return row.mean;
        return -1.0;
    };
    const double d8l = density(8, 0.5), d16l = density(16, 0.5), d24l = density(24, 0.5);
    const double d8h = density(8, 0.9), d16h = density(16, 0.9), d24h = density(24, 0.9);
    std::printf("    scf/L^2 at p=0.5: %.4f %.4f %.4f; at p=0.9: %.5f %.5f %.5f\n", d8l, d16l, d24l,
                d8h, d16h, d24h);
    // nonzero constant: stays finite and flattens, rather than decaying ~ 1/L^2
    bool ok = check(d24l > 0.01, "nonzero density at p=0.5");
    ok = check(d24l > 0.5 * d8l, "density not vanishing at p=0.5") && ok;
    ok = check(std::abs(d24l - d16l) <= std::abs(d16l - d8l) + 0.002, "density converges at p=0.5") && ok;
    ok = check(d8h > d16h && d16h > d24h, "density decreasing at p=0.9") && ok;
    ok = check(d24h < 0.3 * d8h, "density vanishes at p=0.9") && ok;
    return ok;
}

// 12. Dynamic collapse: RXPM h0, h1 at z = 1; RTPM dynamical exponent z.
bool criterion_12() {
    const std::vector<double> thetas{0.25, 0.5, 0.75, 1.0, 1.25, 1.75, 2.0, 2.5, 3.0};
    auto t_rx = recipes::topbot_grid(Model::RXPM, {16, 32}, thetas, 1.0, 0.743, 3000, 20240804, 0);
    fit::DynamicOptions dopts;
    dopts.fit_z = false;
    dopts.z0 = 1.0;
    auto dyn = fit::fit_dynamic_collapse(recipes::dyn_curves_from(t_rx, "symi_topbot"), dopts);
    bool ok = within(dyn.h0.value, 1.53, 0.4, "RXPM h0");
    ok = within(dyn.h1.value, 0.125, 0.04, "RXPM h1") && ok;

    auto t_rt = recipes::topbot_grid(Model::RTPM, {16, 32, 64}, thetas, 1.697, 0.81, 2000, 20240805, 0);
    fit::DynamicOptions zopts;
    zopts.fit_z = true;
    zopts.z0 = 1.5;
    zopts.span_z = 0.5;
    auto dynz = fit::fit_dynamic_collapse(recipes::dyn_curves_from(t_rt, "symi_topbot"), zopts);
    ok = within(dynz.z.value, 1.697, 0.1, "RTPM z") && ok;
    return ok;
}

// 13. RXPM boundary criticality: log-sin coefficient and cross-ratio tail.
bool criterion_13() {
    std::vector<double> cs;
    for (std::size_t L : {32, 64}) {
        std::vector<std::size_t> las;
        for (std::size_t la = 1; la < L; la = la < 4 ? la + 1 : la + std::max<std::size_t>(2, L / 16))
            las.push_back(la);
        if (las.back() != L - 1) las.push_back(L - 1);
        auto prof = recipes::boundary_profile(Model::RXPM, L, L, 0.743, 1200, 20240806 + L, las, {},
                                              8, 0);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < las.size(); ++k)
            pts.push_back({static_cast<double>(las[k]), prof.syms[k].mean});
        auto logsin = fit::fit_log_sin(pts, static_cast<double>(L));
        std::printf("    log-sin c(L=%zu) = %.3f\n", L, logsin.c);
        cs.push_back(logsin.c);
    }
    const double c_avg = 0.5 * (cs[0] + cs[1]);
    bool ok = within(c_avg, 3.03, 0.6, "RXPM boundary c");

    const std::vector<std::size_t> widths{2, 3, 4, 6, 8, 10};
    auto tail = recipes::boundary_profile(Model::RXPM, 64, 64, 0.743, 8000, 20240807, {}, widths, 16, 0);
    std::vector<std::pair<double, double>> chi_pts;
    for (std::size_t k = 0; k < widths.size(); ++k)
        chi_pts.push_back({tail.chi_values[k], tail.symi[k].mean});
    auto delta = fit::fit_power_tail(chi_pts, 0.5);
    ok = within(delta.value, 2.0, 0.4, "RXPM cross-ratio exponent Delta") && ok;
    return ok;
}

struct Criterion {
    int id;
    const char* desc;
    bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "GF(2) kernels match exhaustive row-space enumeration", criterion_1},
    {2, "2^Scf equals the exhaustive ground-state count", criterion_2},
    {3, "CA boundary observables equal the static solve", criterion_3},
    {4, "rule-18 light cone popcounts", criterion_4},
    {5, "CAwRI reversibility at p5 = 1", criterion_5},
    {6, "stabilizer entropies match the dense state-vector oracle", criterion_6},
    {7, "|S_A - symS_A^bd/2| <= l_A on matched pairs; parity identity", criterion_7},
    {8, "RTPM S_cf crossing at p3_c = 0.81 +- 0.03", criterion_8},
    {9, "RTPM collapse nu3 = 1.21 +- 0.2", criterion_9},
    {10, "RXPM symI crossing/collapse: p5_c = 0.743 +- 0.015, nu5 = 1.3 +- 0.2", criterion_10},
    {11, "RXPM S_cf/L^2 phases at p5 = 0.5 and 0.9", criterion_11},
    {12, "dynamic collapse: RXPM h0 = 1.53 +- 0.4, h1 = 0.125 +- 0.04; RTPM z = 1.697 +- 0.1",
     criterion_12},
    {13, "RXPM boundary: c = 3.03 +- 0.6, Delta = 2 +- 0.4", criterion_13},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    int failures = 0;
    for (const auto& crit : kCriteria) {
        if (only && crit.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const bool ok = crit.fn();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", crit.id, crit.desc, secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
