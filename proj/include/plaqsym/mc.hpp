#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plaqsym/model.hpp"

namespace plaqsym::mc {

enum class LtauRule { Ratio, Power, Explicit };

struct SweepConfig {
    model::Model mdl = model::Model::RTPM;
    model::Topology topology = model::Topology::Torus;
    model::BoundaryCondition bc;
    std::vector<std::size_t> sizes;          // L values
    LtauRule ltau_rule = LtauRule::Ratio;
    double ltau_param = 1.0;                 // aspect ratio or exponent
    std::vector<std::size_t> ltau_explicit;  // one per size when Explicit
    std::vector<double> p_values;
    std::size_t realizations = 1;
    std::size_t rep_offset = 0;              // first replicate index
    std::uint64_t base_seed = 1;
    std::vector<std::string> observables;
    std::size_t threads = 0;                 // 0: PLAQSYM_THREADS or hardware

    std::size_t ltau_for(std::size_t size_index) const;
    void validate() const;
};

struct ResultRow {
    std::string model;
    std::size_t L = 0, Ltau = 0;
    double p = 0;
    std::string obs;
    double mean = 0, se = 0;
    std::size_t n = 0;
    std::uint64_t seed0 = 0, seed1 = 0; // replicate index range [seed0, seed1)
    double secs = 0;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    // equality of everything except the timing column
    bool data_equals(const ResultTable& other) const;
};

// "p = range a b step" or explicit list
SweepConfig parse_sweep_config(std::istream& is);

// Deterministic disorder-ensemble sweep: the realization seed of (cell,
// replicate) is base_seed ^ counter_hash(cell_key, replicate), so results do
// not depend on scheduling or worker count.
ResultTable run_sweep(const SweepConfig& cfg);

// Pool tables produced with disjoint replicate ranges per cell.
ResultTable merge(const std::vector<ResultTable>& tables);

void write_csv(const ResultTable& t, std::ostream& os);
ResultTable read_csv(std::istream& is);
void write_json(const ResultTable& t, std::ostream& os);

// Single-realization exact observables (also used by the CLI sample command).
// Values are integers except opsize and the *_density variants; opsize on a
// trivial group is reported as NaN and skipped by the ensemble average.
std::vector<double> evaluate_observables(const model::LatticeGeometry& g,
                                         const model::BoundaryCondition& bc, double p,
                                         std::uint64_t seed,
                                         const std::vector<std::string>& observables);

// Deterministic parallel ensemble of a custom per-realization functional.
// f(seed, replicate) returns a fixed-length value vector; entries may be NaN
// to drop a sample from that slot's statistics.
struct SlotStats {
    double mean = 0, se = 0;
    std::size_t n = 0;
};
std::vector<SlotStats> ensemble(std::size_t n_values, std::size_t realizations, std::size_t rep_offset,
                                std::uint64_t base_seed, std::uint64_t cell_key, std::size_t threads,
                                const std::function<std::vector<double>(std::uint64_t, std::size_t)>& f);

std::size_t default_threads(std::size_t requested);
std::uint64_t cell_key(const model::LatticeGeometry& g, const model::BoundaryCondition& bc, double p);

} // namespace plaqsym::mc
