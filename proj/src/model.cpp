#include "plaqsym/model.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "plaqsym/rng.hpp"

namespace plaqsym::model {

std::string to_string(Model m) { return m == Model::RTPM ? "rtpm" : "rxpm"; }
std::string to_string(Topology t) { return t == Topology::Torus ? "torus" : "cylinder"; }
std::string to_string(Edge e) { return e == Edge::Free ? "free" : "fixed"; }

Model parse_model(const std::string& s) {
    if (s == "rtpm" || s == "RTPM") return Model::RTPM;
    if (s == "rxpm" || s == "RXPM") return Model::RXPM;
    throw std::invalid_argument("unknown model: " + s);
}
Topology parse_topology(const std::string& s) {
    if (s == "torus") return Topology::Torus;
    if (s == "cylinder") return Topology::Cylinder;
    throw std::invalid_argument("unknown topology: " + s);
}
Edge parse_edge(const std::string& s) {
    if (s == "free") return Edge::Free;
    if (s == "fixed") return Edge::Fixed;
    throw std::invalid_argument("unknown edge: " + s);
}

void LatticeGeometry::validate() const {
    if (width < 2 || height < 2) throw std::invalid_argument("lattice needs L >= 2 and L_tau >= 2");
    if (model == Model::RXPM && topology == Topology::Cylinder && height < 3)
        throw std::invalid_argument("RXPM cylinder needs L_tau >= 3");
}

bool site_carries_term(const LatticeGeometry& g, std::size_t tau) {
    if (g.topology == Topology::Torus) return true;
    if (g.model == Model::RTPM) return tau >= 1;
    return tau >= 1 && tau + 1 < g.height;
}

Term sample_term(const LatticeGeometry& g, double p, std::uint64_t seed, std::size_t i, std::size_t tau) {
    if (!site_carries_term(g, tau)) return Term::None;
    const double u = hash_u01(counter_hash(seed, g.site(i, tau)));
    return u < p ? Term::Plaquette : Term::Single;
}

DisorderRealization build_realization(const LatticeGeometry& g, const BoundaryCondition& bc, double p,
                                      std::uint64_t seed) {
    g.validate();
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0,1]");
    DisorderRealization r;
    r.geometry = g;
    r.bc = g.topology == Topology::Cylinder ? bc : BoundaryCondition{};
    r.p = p;
    r.seed = seed;
    r.term_at_site.resize(g.sites());
    for (std::size_t tau = 0; tau < g.height; ++tau)
        for (std::size_t i = 0; i < g.width; ++i)
            r.term_at_site[g.site(i, tau)] = sample_term(g, p, seed, i, tau);
    return r;
}

namespace {

void add_support(std::vector<std::size_t>& acc, std::size_t site) { acc.push_back(site); }

// XOR semantics: coinciding legs cancel.
void write_row(gf2::BinMatrix& m, std::size_t row, std::vector<std::size_t>& sites) {
    for (auto s : sites) m.flip(row, s);
    sites.clear();
}

} // namespace

gf2::BinMatrix assemble_parity_matrix(const DisorderRealization& r) {
    const LatticeGeometry& g = r.geometry;
    const std::size_t L = g.width, Lt = g.height, N = g.sites();
    const bool torus = g.topology == Topology::Torus;

    std::size_t n_terms = 0;
    for (std::size_t s = 0; s < N; ++s)
        if (r.term_at_site[s] != Term::None) ++n_terms;
    std::size_t n_pins = 0;
    if (!torus) {
        if (r.bc.top == Edge::Fixed) n_pins += L;
        if (r.bc.bottom == Edge::Fixed) n_pins += L;
    }

    gf2::BinMatrix P(n_terms + n_pins, N);
    std::vector<std::size_t> supp;
    std::size_t row = 0;
    for (std::size_t tau = 0; tau < Lt; ++tau) {
        for (std::size_t i = 0; i < L; ++i) {
            const Term t = r.term_at_site[g.site(i, tau)];
            if (t == Term::None) continue;
            if (t == Term::Single) {
                add_support(supp, g.site(i, tau));
            } else if (g.model == Model::RTPM) {
                // x(i,tau) = x(i,tau-1) + x(i+1,tau-1)
                const std::size_t up = (tau + Lt - 1) % Lt;
                add_support(supp, g.site(i, tau));
                add_support(supp, g.site(i, up));
                add_support(supp, g.site((i + 1) % L, up));
            } else {
                // X plaquette centered at (i,tau)
                const std::size_t up = (tau + Lt - 1) % Lt;
                const std::size_t down = (tau + 1) % Lt;
                add_support(supp, g.site(i, tau));
                add_support(supp, g.site((i + 1) % L, tau));
                add_support(supp, g.site((i + L - 1) % L, tau));
                add_support(supp, g.site(i, up));
                add_support(supp, g.site(i, down));
            }
            write_row(P, row++, supp);
        }
    }
    if (!torus && r.bc.top == Edge::Fixed)
        for (std::size_t i = 0; i < L; ++i) P.set(row++, g.site(i, 0), true);
    if (!torus && r.bc.bottom == Edge::Fixed)
        for (std::size_t i = 0; i < L; ++i) P.set(row++, g.site(i, Lt - 1), true);
    return P;
}

Region vertical_strip(const LatticeGeometry& g, std::size_t la, std::size_t x0) {
    if (la > g.width) throw std::invalid_argument("strip width exceeds lattice");
    Region reg{"strip", {}};
    for (std::size_t tau = 0; tau < g.height; ++tau)
        for (std::size_t k = 0; k < la; ++k) reg.sites.push_back(g.site((x0 + k) % g.width, tau));
    std::sort(reg.sites.begin(), reg.sites.end());
    return reg;
}

std::pair<Region, Region> antipodal_pair(const LatticeGeometry& g, std::size_t width) {
    if (2 * width > g.width) throw std::invalid_argument("antipodal strips overlap");
    Region a = vertical_strip(g, width, 0);
    Region b = vertical_strip(g, width, g.width / 2);
    a.name = "A";
    b.name = "B";
    return {std::move(a), std::move(b)};
}

namespace {
Region boundary_layers(const LatticeGeometry& g, std::size_t tau0, std::size_t depth, const std::string& name) {
    Region reg{name, {}};
    for (std::size_t d = 0; d < depth; ++d)
        for (std::size_t i = 0; i < g.width; ++i) reg.sites.push_back(g.site(i, tau0 + d));
    std::sort(reg.sites.begin(), reg.sites.end());
    return reg;
}
} // namespace

Region boundary_top(const LatticeGeometry& g) {
    if (g.topology != Topology::Cylinder) throw std::invalid_argument("boundary regions need a cylinder");
    return boundary_layers(g, 0, g.boundary_depth(), "top");
}

Region boundary_bottom(const LatticeGeometry& g) {
    if (g.topology != Topology::Cylinder) throw std::invalid_argument("boundary regions need a cylinder");
    return boundary_layers(g, g.height - g.boundary_depth(), g.boundary_depth(), "bottom");
}

Region boundary_segment(const LatticeGeometry& g, std::size_t x1, std::size_t x2) {
    if (g.topology != Topology::Cylinder) throw std::invalid_argument("boundary regions need a cylinder");
    if (x1 > x2 || x2 > g.width) throw std::invalid_argument("bad boundary segment");
    Region reg{"segment", {}};
    for (std::size_t d = 0; d < g.boundary_depth(); ++d)
        for (std::size_t i = x1; i < x2; ++i) reg.sites.push_back(g.site(i, d));
    std::sort(reg.sites.begin(), reg.sites.end());
    return reg;
}

Region boundary_half(const LatticeGeometry& g) {
    Region reg = boundary_segment(g, 0, g.width / 2);
    reg.name = "half";
    return reg;
}

std::pair<Region, Region> boundary_antipodal(const LatticeGeometry& g, std::size_t width) {
    if (2 * width > g.width) throw std::invalid_argument("antipodal segments overlap");
    Region a = boundary_segment(g, 0, width);
    Region b = boundary_segment(g, g.width / 2, g.width / 2 + width);
    a.name = "A";
    b.name = "B";
    return {std::move(a), std::move(b)};
}

Region complement_within(const Region& whole, const Region& part, const std::string& name) {
    Region reg{name, {}};
    std::set_difference(whole.sites.begin(), whole.sites.end(), part.sites.begin(), part.sites.end(),
                        std::back_inserter(reg.sites));
    return reg;
}

Region lattice_complement(const LatticeGeometry& g, const Region& part, const std::string& name) {
    Region whole{"all", {}};
    whole.sites.resize(g.sites());
    for (std::size_t s = 0; s < g.sites(); ++s) whole.sites[s] = s;
    return complement_within(whole, part, name);
}

void write_realization(const DisorderRealization& r, std::ostream& os) {
    const LatticeGeometry& g = r.geometry;
    os << "plaqsym-realization v1\n";
    os << "model " << to_string(g.model) << "\n";
    os << "topology " << to_string(g.topology) << "\n";
    os << "L " << g.width << "\n";
    os << "Ltau " << g.height << "\n";
    if (g.topology == Topology::Cylinder)
        os << "bc " << to_string(r.bc.top) << " " << to_string(r.bc.bottom) << "\n";
    os << "p " << r.p << "\n";
    os << "seed " << r.seed << "\n";
    os << "terms\n";
    for (std::size_t tau = 0; tau < g.height; ++tau) {
        for (std::size_t i = 0; i < g.width; ++i) {
            const Term t = r.term_at_site[g.site(i, tau)];
            os << (t == Term::Plaquette ? 'P' : t == Term::Single ? 'S' : '.');
        }
        os << "\n";
    }
    os << "end\n";
}

DisorderRealization read_realization(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "plaqsym-realization v1")
        throw std::runtime_error("bad realization header");
    DisorderRealization r;
    LatticeGeometry& g = r.geometry;
    bool in_terms = false;
    std::vector<std::string> grid;
    while (std::getline(is, line)) {
        if (line == "end") break;
        if (in_terms) {
            grid.push_back(line);
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "model") {
            std::string v;
            ls >> v;
            g.model = parse_model(v);
        } else if (key == "topology") {
            std::string v;
            ls >> v;
            g.topology = parse_topology(v);
        } else if (key == "L") {
            ls >> g.width;
        } else if (key == "Ltau") {
            ls >> g.height;
        } else if (key == "bc") {
            std::string t, b;
            ls >> t >> b;
            r.bc.top = parse_edge(t);
            r.bc.bottom = parse_edge(b);
        } else if (key == "p") {
            ls >> r.p;
        } else if (key == "seed") {
            ls >> r.seed;
        } else if (key == "terms") {
            in_terms = true;
        } else {
            throw std::runtime_error("unknown realization key: " + key);
        }
    }
    g.validate();
    if (grid.size() != g.height) throw std::runtime_error("realization term grid height mismatch");
    r.term_at_site.assign(g.sites(), Term::None);
    for (std::size_t tau = 0; tau < g.height; ++tau) {
        if (grid[tau].size() != g.width) throw std::runtime_error("realization term grid width mismatch");
        for (std::size_t i = 0; i < g.width; ++i) {
            const char c = grid[tau][i];
            r.term_at_site[g.site(i, tau)] =
                c == 'P' ? Term::Plaquette : c == 'S' ? Term::Single : Term::None;
        }
    }
    return r;
}

} // namespace plaqsym::model
