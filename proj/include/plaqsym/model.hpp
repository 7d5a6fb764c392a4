#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "plaqsym/bits.hpp"

namespace plaqsym::model {

enum class Model : std::uint8_t { RTPM, RXPM };
enum class Topology : std::uint8_t { Torus, Cylinder };
enum class Edge : std::uint8_t { Free, Fixed };
enum class Term : std::uint8_t { Plaquette, Single, None };

std::string to_string(Model m);
std::string to_string(Topology t);
std::string to_string(Edge e);
Model parse_model(const std::string& s);
Topology parse_topology(const std::string& s);
Edge parse_edge(const std::string& s);

// L x L_tau lattice; horizontal direction (width) is always periodic, the
// torus closes the vertical direction too. Site (i, tau) -> tau*L + i.
struct LatticeGeometry {
    Model model = Model::RTPM;
    Topology topology = Topology::Torus;
    std::size_t width = 0;  // L
    std::size_t height = 0; // L_tau

    std::size_t sites() const { return width * height; }
    std::size_t site(std::size_t i, std::size_t tau) const { return tau * width + i; }
    void validate() const;

    // Layers of the free/fixed boundary region at each end. The RXPM boundary
    // contains two layers of spins, the RTPM boundary one.
    std::size_t boundary_depth() const { return model == Model::RXPM ? 2 : 1; }
};

// Cylinder edges only; a torus carries no boundary condition.
struct BoundaryCondition {
    Edge top = Edge::Free;
    Edge bottom = Edge::Free;
};

struct DisorderRealization {
    LatticeGeometry geometry;
    BoundaryCondition bc;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<Term> term_at_site; // indexed by site; None on term-free layers

    std::size_t sites() const { return geometry.sites(); }
};

// True if the site (i, tau) carries a disorder term at all (cylinder edge
// layers carry none: their plaquettes would cross the open edge).
bool site_carries_term(const LatticeGeometry& g, std::size_t tau);

// The per-site disorder choice shared by the static assembly and the CA
// evolution: plaquette with probability p, keyed by (seed, site index).
Term sample_term(const LatticeGeometry& g, double p, std::uint64_t seed, std::size_t i, std::size_t tau);

DisorderRealization build_realization(const LatticeGeometry& g, const BoundaryCondition& bc, double p,
                                      std::uint64_t seed);

// One row per constraint, columns indexed by site.
//   RTPM plaquette anchored at (i,tau): ones at (i,tau), (i,tau-1), (i+1,tau-1)
//   RXPM plaquette centered at (i,tau): ones at (i,tau), (i+-1,tau), (i,tau+-1)
//   single-site term at s: one at s
// Rows appear in anchor-site order, then fixed-top pin rows, then
// fixed-bottom pin rows (sigma=+1 <=> x=0). Coinciding legs on degenerate
// wraps cancel mod 2.
gf2::BinMatrix assemble_parity_matrix(const DisorderRealization& r);

struct Region {
    std::string name;
    std::vector<std::size_t> sites; // ascending
};

// Strip of columns [x0, x0+la) over the full height.
Region vertical_strip(const LatticeGeometry& g, std::size_t la, std::size_t x0 = 0);
// Two strips of the given width separated by L/2.
std::pair<Region, Region> antipodal_pair(const LatticeGeometry& g, std::size_t width);
// Free/fixed boundary regions of a cylinder (1 layer RTPM, 2 layers RXPM).
Region boundary_top(const LatticeGeometry& g);
Region boundary_bottom(const LatticeGeometry& g);
// Arc [x1, x2) of the top boundary; for RXPM the outer-layer sites paired
// with the sites directly beneath.
Region boundary_segment(const LatticeGeometry& g, std::size_t x1, std::size_t x2);
Region boundary_half(const LatticeGeometry& g);
std::pair<Region, Region> boundary_antipodal(const LatticeGeometry& g, std::size_t width);
// Sites of `whole` not in `part`.
Region complement_within(const Region& whole, const Region& part, const std::string& name = "complement");
// Complement within the full lattice.
Region lattice_complement(const LatticeGeometry& g, const Region& part, const std::string& name = "complement");

// Text export/import for replay. The stored term bitmap is authoritative on
// read.
void write_realization(const DisorderRealization& r, std::ostream& os);
DisorderRealization read_realization(std::istream& is);

} // namespace plaqsym::model
