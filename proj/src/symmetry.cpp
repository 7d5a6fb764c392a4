#include "plaqsym/symmetry.hpp"

#include <algorithm>
#include <stdexcept>

namespace plaqsym::sym {

namespace {

void require_disjoint(const Region& a, const Region& b) {
    std::vector<std::size_t> inter;
    std::set_intersection(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                          std::back_inserter(inter));
    if (!inter.empty()) throw std::invalid_argument("regions overlap");
}

Region union_region(const Region& a, const Region& b) {
    Region u{a.name + b.name, {}};
    std::set_union(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                   std::back_inserter(u.sites));
    return u;
}

} // namespace

SymmetryTableau solve_symmetry_group(const gf2::BinMatrix& p) { return {gf2::nullspace(p)}; }

std::size_t config_entropy(const SymmetryTableau& t) { return t.generators(); }

std::size_t region_rank(const SymmetryTableau& t, const Region& d) {
    return gf2::rank(gf2::restrict_rows(t.t, d.sites));
}

std::size_t sym_entropy(const SymmetryTableau& t, const LatticeGeometry& g, const Region& a) {
    const Region abar = model::lattice_complement(g, a);
    return region_rank(t, a) + region_rank(t, abar) - t.generators();
}

std::size_t sym_mutual_info_cond(const SymmetryTableau& t, const Region& a, const Region& b) {
    require_disjoint(a, b);
    const Region ab = union_region(a, b);
    return region_rank(t, a) + region_rank(t, b) - region_rank(t, ab);
}

std::vector<std::size_t> BoundaryTableau::rows_of(const Region& a) const {
    std::vector<std::size_t> rows;
    rows.reserve(a.sites.size());
    std::size_t k = 0;
    for (auto s : a.sites) {
        while (k < sites.size() && sites[k] < s) ++k;
        if (k == sites.size() || sites[k] != s)
            throw std::invalid_argument("region not contained in boundary");
        rows.push_back(k);
    }
    return rows;
}

BoundaryTableau boundary_tableau(const SymmetryTableau& t, const Region& boundary) {
    BoundaryTableau bd;
    bd.sites = boundary.sites;
    bd.t = gf2::restrict_rows(t.t, boundary.sites);
    bd.log_g_bd = gf2::rank(bd.t);
    return bd;
}

std::size_t boundary_sym_entropy(const BoundaryTableau& bd, const Region& a) {
    const auto rows_a = bd.rows_of(a);
    std::vector<std::size_t> rows_abar;
    std::size_t k = 0;
    for (std::size_t r = 0; r < bd.sites.size(); ++r) {
        if (k < rows_a.size() && rows_a[k] == r) {
            ++k;
            continue;
        }
        rows_abar.push_back(r);
    }
    const std::size_t ra = gf2::rank(gf2::restrict_rows(bd.t, rows_a));
    const std::size_t rb = gf2::rank(gf2::restrict_rows(bd.t, rows_abar));
    return ra + rb - bd.log_g_bd;
}

std::size_t boundary_mutual_info(const BoundaryTableau& bd, const Region& a, const Region& b) {
    require_disjoint(a, b);
    const Region ab = union_region(a, b);
    return boundary_sym_entropy(bd, a) + boundary_sym_entropy(bd, b) - boundary_sym_entropy(bd, ab);
}

std::size_t top_bottom_mutual_info(const SymmetryTableau& t, const Region& top, const Region& bottom) {
    return sym_mutual_info_cond(t, top, bottom);
}

double operator_size(const SymmetryTableau& t, std::mt19937_64& rng, std::size_t n_samples) {
    const std::size_t n = t.sites(), m = t.generators();
    if (m == 0) throw std::runtime_error("trivial group");
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    std::vector<gf2::BitVector> gens(m, gf2::BitVector(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < m; ++k)
            if (t.t.get(r, k)) gens[k].set(r);
    std::size_t total = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        gf2::BitVector v(n);
        int guard = 0;
        do {
            for (auto& gvec : gens)
                if (rng() & 1u) v.xor_with(gvec);
            if (++guard > 4096) throw std::runtime_error("trivial group");
        } while (!v.any());
        total += v.popcount();
    }
    return static_cast<double>(total) / static_cast<double>(n_samples) /
           static_cast<double>(n);
}

gf2::BitVector union_support(const SymmetryTableau& t) {
    gf2::BitVector u(t.sites());
    for (std::size_t r = 0; r < t.sites(); ++r)
        for (std::size_t k = 0; k < t.generators(); ++k)
            if (t.t.get(r, k)) {
                u.set(r);
                break;
            }
    return u;
}

std::vector<std::string> snapshot_grid(const LatticeGeometry& g, const gf2::BitVector& sampled,
                                       const gf2::BitVector& usup) {
    std::vector<std::string> out;
    out.reserve(g.height);
    for (std::size_t tau = 0; tau < g.height; ++tau) {
        std::string line(g.width, '.');
        for (std::size_t i = 0; i < g.width; ++i) {
            const std::size_t s = g.site(i, tau);
            if (sampled.size() > s && sampled.get(s))
                line[i] = 'B';
            else if (usup.size() > s && usup.get(s))
                line[i] = 'G';
        }
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace plaqsym::sym
