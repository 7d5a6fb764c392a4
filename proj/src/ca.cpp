#include "plaqsym/ca.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "plaqsym/rng.hpp"

namespace plaqsym::ca {

CaGeneratorState ca_initial_state(Model m, std::size_t width, bool record) {
    CaGeneratorState st;
    st.model = m;
    st.width = width;
    st.record = record;
    if (m == Model::RTPM) {
        st.layer = 0;
        st.gens.resize(width);
        for (std::size_t k = 0; k < width; ++k) {
            auto& g = st.gens[k];
            g.tag = BitVector::unit(width, k);
            g.cur = BitVector::unit(width, k);
            if (record) g.history = {g.cur};
        }
    } else {
        st.layer = 1;
        st.gens.resize(2 * width);
        for (std::size_t i = 0; i < width; ++i) {
            auto& g0 = st.gens[i]; // X_{i,0}
            g0.tag = BitVector::unit(2 * width, i);
            g0.prev = BitVector::unit(width, i);
            g0.cur = BitVector(width);
            if (record) g0.history = {g0.prev, g0.cur};
        }
        for (std::size_t i = 0; i < width; ++i) {
            auto& g1 = st.gens[width + i]; // X_{i,1}
            g1.tag = BitVector::unit(2 * width, width + i);
            g1.prev = BitVector(width);
            g1.cur = BitVector::unit(width, i);
            if (record) g1.history = {g1.prev, g1.cur};
        }
    }
    return st;
}

void pca_step_rtpm(CaGeneratorState& st, const BitVector& plaq_mask) {
    if (st.model != Model::RTPM) throw std::invalid_argument("pca_step_rtpm: RTPM state required");
    for (auto& g : st.gens) {
        BitVector next = g.cur;
        next.xor_with(g.cur.rotated_up());
        next.and_with(plaq_mask);
        g.cur = std::move(next);
        if (st.record) g.history.push_back(g.cur);
    }
    ++st.layer;
}

void cawri_step_rxpm(CaGeneratorState& st, const BitVector& plaq_mask) {
    if (st.model != Model::RXPM) throw std::invalid_argument("cawri_step_rxpm: RXPM state required");
    const std::size_t L = st.width;

    std::vector<std::size_t> impurity_sites;
    for (std::size_t i = 0; i < L; ++i)
        if (!plaq_mask.get(i)) impurity_sites.push_back(i);

    // enforce x^tau_i = 0 at each impurity, ascending site order
    for (auto i : impurity_sites) {
        std::size_t first = st.gens.size();
        for (std::size_t k = 0; k < st.gens.size(); ++k) {
            if (st.gens[k].cur.get(i)) {
                first = k;
                break;
            }
        }
        if (first < st.gens.size()) {
            const CaGeneratorState::Gen pivot = st.gens[first];
            for (std::size_t k = first + 1; k < st.gens.size(); ++k) {
                auto& g = st.gens[k];
                if (!g.cur.get(i)) continue;
                g.tag.xor_with(pivot.tag);
                g.prev.xor_with(pivot.prev);
                g.cur.xor_with(pivot.cur);
                if (st.record)
                    for (std::size_t h = 0; h < g.history.size(); ++h) g.history[h].xor_with(pivot.history[h]);
            }
            st.gens.erase(st.gens.begin() + static_cast<std::ptrdiff_t>(first));
        }
        st.impurities.emplace_back(i, st.layer);
    }

    // advance survivors; impurity columns stay 0 for pre-existing generators
    for (auto& g : st.gens) {
        BitVector next = g.cur;
        next.xor_with(g.cur.rotated_up());
        next.xor_with(g.cur.rotated_down());
        next.xor_with(g.prev);
        next.and_with(plaq_mask);
        g.prev = std::move(g.cur);
        g.cur = std::move(next);
        if (st.record) g.history.push_back(g.cur);
    }

    // the on-site term frees one spin on the next layer
    for (auto i : impurity_sites) {
        CaGeneratorState::Gen fresh;
        fresh.tag = BitVector(2 * L);
        fresh.prev = BitVector(L);
        fresh.cur = BitVector::unit(L, i);
        if (st.record) {
            fresh.history.assign(st.layer + 1, BitVector(L));
            fresh.history.push_back(fresh.cur);
        }
        st.gens.push_back(std::move(fresh));
    }

    ++st.layer;
}

namespace {

BitVector layer_mask(const LatticeGeometry& g, double p, std::uint64_t seed, std::size_t tau) {
    BitVector mask(g.width);
    for (std::size_t i = 0; i < g.width; ++i)
        if (model::sample_term(g, p, seed, i, tau) == model::Term::Plaquette) mask.set(i);
    return mask;
}

std::vector<std::string> render_snapshot(const CaGeneratorState& st, std::size_t height,
                                         std::uint64_t rng_seed) {
    const std::size_t L = st.width;
    // boundary-connected generators: initial support or support on the final
    // boundary region; everything else is bulk-born and bulk-bound
    std::vector<std::size_t> boundary_ids, bulk_ids;
    for (std::size_t k = 0; k < st.gens.size(); ++k) {
        const auto& g = st.gens[k];
        const bool final_support = st.model == Model::RXPM ? (g.cur.any() || g.prev.any()) : g.cur.any();
        if (g.tag.any() || final_support)
            boundary_ids.push_back(k);
        else
            bulk_ids.push_back(k);
    }
    std::vector<BitVector> gray(height, BitVector(L)), orange(height, BitVector(L));
    auto accumulate_union = [&](std::vector<BitVector>& acc, const std::vector<std::size_t>& ids) {
        for (auto k : ids)
            for (std::size_t h = 0; h < st.gens[k].history.size() && h < height; ++h) {
                auto dst = acc[h].words();
                auto src = st.gens[k].history[h].words();
                for (std::size_t w = 0; w < src.size(); ++w) dst[w] |= src[w];
            }
    };
    accumulate_union(gray, boundary_ids);
    accumulate_union(orange, bulk_ids);

    std::vector<std::vector<bool>> blue(height, std::vector<bool>(L, false));
    if (!boundary_ids.empty()) {
        std::mt19937_64 rng(splitmix64(rng_seed));
        const auto& g = st.gens[boundary_ids[rng() % boundary_ids.size()]];
        for (std::size_t h = 0; h < g.history.size() && h < height; ++h)
            for (std::size_t i = 0; i < L; ++i)
                if (g.history[h].get(i)) blue[h][i] = true;
    }

    std::vector<std::string> out(height, std::string(L, '.'));
    for (std::size_t h = 0; h < height; ++h)
        for (std::size_t i = 0; i < L; ++i) {
            if (blue[h][i])
                out[h][i] = 'B';
            else if (orange[h].get(i))
                out[h][i] = 'O';
            else if (gray[h].get(i))
                out[h][i] = 'G';
        }
    return out;
}

} // namespace

CaRunResult run_dynamics(Model m, std::size_t width, std::size_t height, double p, std::uint64_t seed,
                         const CaOptions& opts) {
    LatticeGeometry g{m, model::Topology::Cylinder, width, height};
    g.validate();

    CaGeneratorState st = ca_initial_state(m, width, opts.record_snapshot);
    if (m == Model::RTPM) {
        for (std::size_t tau = 1; tau < height; ++tau) pca_step_rtpm(st, layer_mask(g, p, seed, tau));
    } else {
        for (std::size_t tau = 1; tau + 1 < height; ++tau) cawri_step_rxpm(st, layer_mask(g, p, seed, tau));
    }

    CaRunResult res;
    res.n_impurities = st.impurities.size();
    res.n_generators = st.gens.size();

    const std::size_t tag_cols = m == Model::RXPM ? 2 * width : width;
    const std::size_t fin_cols = m == Model::RXPM ? 2 * width : width;
    gf2::BinMatrix rows(st.gens.size(), tag_cols + fin_cols);
    for (std::size_t k = 0; k < st.gens.size(); ++k) {
        const auto& gen = st.gens[k];
        for (std::size_t c = 0; c < tag_cols; ++c)
            if (gen.tag.get(c)) rows.set(k, c, true);
        if (m == Model::RXPM) {
            for (std::size_t i = 0; i < width; ++i) {
                if (gen.prev.get(i)) rows.set(k, tag_cols + i, true);
                if (gen.cur.get(i)) rows.set(k, tag_cols + width + i, true);
            }
        } else {
            for (std::size_t i = 0; i < width; ++i)
                if (gen.cur.get(i)) rows.set(k, tag_cols + i, true);
        }
    }
    // eliminate redundancies among the generators
    gf2::RrefResult rr = gf2::rref(rows);
    std::vector<std::size_t> keep(rr.rank);
    for (std::size_t i = 0; i < rr.rank; ++i) keep[i] = i;
    gf2::BinMatrix reduced = gf2::restrict_rows(rr.matrix, keep);

    std::vector<std::size_t> c0(tag_cols), c1(fin_cols);
    for (std::size_t c = 0; c < tag_cols; ++c) c0[c] = c;
    for (std::size_t c = 0; c < fin_cols; ++c) c1[c] = tag_cols + c;
    res.tableau.t0 = gf2::restrict_columns(reduced, c0);
    res.tableau.t_tau = gf2::restrict_columns(reduced, c1);
    res.tableau.fixed_cols = width;

    if (opts.record_snapshot) res.snapshot = render_snapshot(st, height, opts.snapshot_rng_seed ^ seed);
    return res;
}

BinMatrix apply_fixed_boundary(const DynamicBoundaryTableau& dt) {
    const gf2::BinMatrix full = gf2::hstack(dt.t0, dt.t_tau);
    std::vector<std::size_t> targets(dt.fixed_cols);
    const std::size_t base = dt.t0.cols() + dt.t_tau.cols() - dt.fixed_cols;
    for (std::size_t k = 0; k < dt.fixed_cols; ++k) targets[k] = base + k;
    gf2::ZeroBlockResult zr = gf2::zero_block_reduce(full, targets);

    std::vector<std::size_t> c0(dt.t0.cols());
    for (std::size_t c = 0; c < c0.size(); ++c) c0[c] = c;
    gf2::BinMatrix q1 = gf2::restrict_columns(zr.kept, c0);
    std::vector<std::size_t> nonzero;
    for (std::size_t r = 0; r < q1.rows(); ++r)
        if (!q1.row_empty(r)) nonzero.push_back(r);
    return gf2::restrict_rows(q1, nonzero);
}

std::size_t dynamic_top_bottom_mi(const DynamicBoundaryTableau& dt) {
    const std::size_t total = gf2::rank(gf2::hstack(dt.t0, dt.t_tau));
    return gf2::rank(dt.t0) + gf2::rank(dt.t_tau) - total;
}

std::size_t block_entropy(const BinMatrix& m, std::span<const std::size_t> cols_a) {
    std::vector<char> in_a(m.cols(), 0);
    for (auto c : cols_a) {
        if (c >= m.cols()) throw std::out_of_range("block_entropy: column out of range");
        in_a[c] = 1;
    }
    std::vector<std::size_t> comp;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!in_a[c]) comp.push_back(c);
    return gf2::rank(gf2::restrict_columns(m, cols_a)) + gf2::rank(gf2::restrict_columns(m, comp)) -
           gf2::rank(m);
}

std::vector<std::size_t> top_segment_cols(Model m, std::size_t width, std::size_t x1, std::size_t x2) {
    if (x1 > x2 || x2 > width) throw std::invalid_argument("bad segment");
    const std::size_t depth = m == Model::RXPM ? 2 : 1;
    std::vector<std::size_t> cols;
    for (std::size_t d = 0; d < depth; ++d)
        for (std::size_t i = x1; i < x2; ++i) cols.push_back(d * width + i);
    return cols;
}

} // namespace plaqsym::ca
