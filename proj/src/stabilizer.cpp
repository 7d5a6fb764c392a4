#include "plaqsym/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "plaqsym/rng.hpp"
#include "plaqsym/symmetry.hpp"

namespace plaqsym::stab {

PauliString PauliString::single(std::size_t n, std::size_t site, PauliBasis b) {
    PauliString p{BitVector(n), BitVector(n), 0};
    if (b == PauliBasis::X || b == PauliBasis::Y) p.x.set(site);
    if (b == PauliBasis::Z || b == PauliBasis::Y) p.z.set(site);
    return p;
}

PauliString StabilizerTableau::row(std::size_t j) const { return {x.row(j), z.row(j), sign[j]}; }

void StabilizerTableau::set_row(std::size_t j, const PauliString& p) {
    x.set_row(j, p.x);
    z.set_row(j, p.z);
    sign[j] = p.sign;
}

StabilizerTableau build_cluster_state(std::size_t lx, std::size_t ly, Patch patch) {
    if (lx < 1 || ly < 1) throw std::invalid_argument("cluster patch needs at least one site");
    const std::size_t n = lx * ly;
    StabilizerTableau t{n, BinMatrix(n, n), BinMatrix(n, n), std::vector<std::uint8_t>(n, 0)};
    const bool px = patch != Patch::Open; // horizontal wrap
    const bool py = patch == Patch::Torus;
    auto id = [lx](std::size_t i, std::size_t j) { return j * lx + i; };
    for (std::size_t j = 0; j < ly; ++j)
        for (std::size_t i = 0; i < lx; ++i) {
            const std::size_t q = id(i, j);
            t.x.set(q, q, true);
            if (px || i + 1 < lx) t.z.flip(q, id((i + 1) % lx, j));
            if (px || i > 0) t.z.flip(q, id((i + lx - 1) % lx, j));
            if (py || j + 1 < ly) t.z.flip(q, id(i, (j + 1) % ly));
            if (py || j > 0) t.z.flip(q, id(i, (j + ly - 1) % ly));
        }
    return t;
}

bool anticommute(const PauliString& a, const PauliString& b) {
    auto ax = a.x.words(), az = a.z.words(), bx = b.x.words(), bz = b.z.words();
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < ax.size(); ++w) acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w]);
    return std::popcount(acc) & 1;
}

void multiply_into(PauliString& a, const PauliString& b) {
    // phase exponent of i from per-site single-Pauli products:
    // +1 for XY, YZ, ZX; -1 for XZ, YX, ZY
    auto ax = a.x.words(), az = a.z.words();
    auto bx = b.x.words(), bz = b.z.words();
    long long phase = 0;
    for (std::size_t w = 0; w < ax.size(); ++w) {
        const std::uint64_t x1 = ax[w], z1 = az[w], x2 = bx[w], z2 = bz[w];
        const std::uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
        const std::uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
        const std::uint64_t plus = (X1 & Y2) | (Y1 & Z2) | (Z1 & X2);
        const std::uint64_t minus = (X1 & Z2) | (Y1 & X2) | (Z1 & Y2);
        phase += std::popcount(plus) - std::popcount(minus);
    }
    phase &= 3;
    if (phase & 1) throw std::logic_error("multiply_into: anticommuting factors");
    a.x.xor_with(b.x);
    a.z.xor_with(b.z);
    a.sign = static_cast<std::uint8_t>(a.sign ^ b.sign ^ (phase >> 1));
}

BinMatrix commutator_matrix(const StabilizerTableau& t, const std::vector<PauliString>& observables) {
    BinMatrix p(observables.size(), t.generators());
    for (std::size_t i = 0; i < observables.size(); ++i) {
        if (observables[i].x.size() != t.n) throw std::invalid_argument("observable size mismatch");
        for (std::size_t j = 0; j < t.generators(); ++j)
            if (anticommute(observables[i], t.row(j))) p.set(i, j, true);
    }
    return p;
}

namespace {

// Express a Pauli commuting with every generator as a product of generators
// and return the sign of that product relative to o (0: product = +o).
int deterministic_outcome(const StabilizerTableau& t, const PauliString& o) {
    const std::size_t g = t.generators(), n2 = 2 * t.n;
    BinMatrix m = gf2::hstack(t.x, t.z);
    std::vector<BitVector> comb(g, BitVector(g));
    for (std::size_t j = 0; j < g; ++j) comb[j].set(j);
    std::size_t r = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col)
    for (std::size_t c = 0; c < n2 && r < g; ++c) {
        std::size_t pr = g;
        for (std::size_t i = r; i < g; ++i)
            if (m.get(i, c)) {
                pr = i;
                break;
            }
        if (pr == g) continue;
        m.swap_rows(r, pr);
        std::swap(comb[r], comb[pr]);
        for (std::size_t i = 0; i < g; ++i)
            if (i != r && m.get(i, c)) {
                m.xor_rows(i, r);
                comb[i].xor_with(comb[r]);
            }
        pivots.emplace_back(r, c);
        ++r;
    }
    BitVector acc(n2), chosen(g);
    for (std::size_t c = 0; c < t.n; ++c) {
        if (o.x.get(c)) acc.set(c, !acc.get(c));
        if (o.z.get(c)) acc.set(t.n + c, !acc.get(t.n + c));
    }
    for (auto [row, col] : pivots)
        if (acc.get(col)) {
            for (std::size_t c = 0; c < n2; ++c)
                if (m.get(row, c)) acc.set(c, !acc.get(c));
            chosen.xor_with(comb[row]);
        }
    if (acc.any()) throw std::logic_error("deterministic_outcome: observable outside the group");
    PauliString prod{BitVector(t.n), BitVector(t.n), 0};
    for (std::size_t j = 0; j < g; ++j)
        if (chosen.get(j)) multiply_into(prod, t.row(j));
    if (!(prod.x == o.x) || !(prod.z == o.z))
        throw std::logic_error("deterministic_outcome: reconstruction mismatch");
    return prod.sign ^ o.sign;
}

} // namespace

int measure(StabilizerTableau& t, const PauliString& o, std::mt19937_64& rng) {
    if (o.x.size() != t.n) throw std::invalid_argument("measure: size mismatch");
    std::vector<std::size_t> anti;
    for (std::size_t j = 0; j < t.generators(); ++j)
        if (anticommute(o, t.row(j))) anti.push_back(j);
    if (anti.empty()) return deterministic_outcome(t, o);

    const std::size_t a = anti[0];
    const PauliString pivot = t.row(a);
    for (std::size_t k = 1; k < anti.size(); ++k) {
        PauliString rowk = t.row(anti[k]);
        multiply_into(rowk, pivot);
        t.set_row(anti[k], rowk);
    }
    const int outcome = static_cast<int>(rng() & 1u);
    PauliString post = o;
    post.sign = static_cast<std::uint8_t>(outcome);
    t.set_row(a, post);
    return outcome;
}

MeasurementPattern pattern_from_realization(const model::DisorderRealization& r) {
    MeasurementPattern pat;
    for (std::size_t s = 0; s < r.sites(); ++s) {
        const auto term = r.term_at_site[s];
        if (term == model::Term::None) continue;
        pat.ops.emplace_back(s, term == model::Term::Plaquette ? PauliBasis::Y : PauliBasis::Z);
    }
    return pat;
}

std::vector<PauliString> observables_of(const MeasurementPattern& pat, std::size_t n) {
    std::vector<PauliString> obs;
    obs.reserve(pat.ops.size());
    for (auto [site, basis] : pat.ops) obs.push_back(PauliString::single(n, site, basis));
    return obs;
}

void measure_all(StabilizerTableau& t, const MeasurementPattern& pat, std::mt19937_64& rng) {
    for (auto [site, basis] : pat.ops) measure(t, PauliString::single(t.n, site, basis), rng);
}

std::size_t entropy2(const StabilizerTableau& t, std::span<const std::size_t> region) {
    std::vector<char> in(t.n, 0);
    for (auto q : region) {
        if (q >= t.n) throw std::out_of_range("entropy2: qubit out of range");
        in[q] = 1;
    }
    std::vector<std::size_t> cols_a, cols_b;
    for (std::size_t q = 0; q < t.n; ++q) {
        auto& dst = in[q] ? cols_a : cols_b;
        dst.push_back(q);
        dst.push_back(t.n + q);
    }
    const BinMatrix m = gf2::hstack(t.x, t.z);
    const std::size_t ra = gf2::rank(gf2::restrict_columns(m, cols_a));
    const std::size_t rb = gf2::rank(gf2::restrict_columns(m, cols_b));
    return ra + rb - t.generators();
}

EquivalenceReport check_equivalence(const model::DisorderRealization& r, std::uint64_t outcome_seed) {
    const auto& g = r.geometry;
    if (g.model != model::Model::RXPM || g.topology != model::Topology::Cylinder ||
        r.bc.top != model::Edge::Free || r.bc.bottom != model::Edge::Free)
        throw std::invalid_argument("check_equivalence needs a free-free RXPM cylinder");

    EquivalenceReport rep;
    const std::size_t L = g.width;

    StabilizerTableau cluster = build_cluster_state(L, g.height, Patch::Cylinder);
    const MeasurementPattern pat = pattern_from_realization(r);
    const auto obs = observables_of(pat, cluster.n);
    rep.parity_match = commutator_matrix(cluster, obs) == model::assemble_parity_matrix(r);

    std::mt19937_64 rng(splitmix64(outcome_seed));
    measure_all(cluster, pat, rng);

    auto tab = sym::solve_symmetry_group(model::assemble_parity_matrix(r));
    model::Region top = model::boundary_top(g);
    model::Region bot = model::boundary_bottom(g);
    model::Region both{"bd", {}};
    std::set_union(top.sites.begin(), top.sites.end(), bot.sites.begin(), bot.sites.end(),
                   std::back_inserter(both.sites));
    auto bd = sym::boundary_tableau(tab, both);

    for (std::size_t x1 = 0; x1 < L; ++x1) {
        for (std::size_t len = 1; len < L; ++len) {
            if (x1 + len > L) continue;
            std::vector<std::size_t> qubits;
            for (std::size_t i = x1; i < x1 + len; ++i) qubits.push_back(g.site(i, 0));
            const std::size_t s2 = entropy2(cluster, qubits);
            const std::size_t sym = sym::boundary_sym_entropy(bd, model::boundary_segment(g, x1, x1 + len));
            // l_A = number of endpoints; every proper interval of the
            // periodic boundary ring has two.
            const int l_a = 2;
            const int gap = std::abs(static_cast<int>(s2) - static_cast<int>(sym)) - 2 * l_a;
            rep.max_two_sided_gap = std::max(rep.max_two_sided_gap, gap);
            rep.intervals += 1;
            if (gap > 0) rep.violations += 1;
        }
    }
    return rep;
}

} // namespace plaqsym::stab
