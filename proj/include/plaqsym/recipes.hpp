#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plaqsym/fit.hpp"
#include "plaqsym/mc.hpp"
#include "plaqsym/model.hpp"

namespace plaqsym::recipes {

enum class Scale { Quick, Desk };
Scale parse_scale(const std::string& s);

struct OutputFile {
    std::string name;
    std::string content;
};

struct RecipeResult {
    std::string id;
    std::vector<OutputFile> files;
    std::string summary; // one line per extracted quantity
};

std::vector<std::string> recipe_ids();

// Scaled-down reproduction pipelines; each emits data CSVs, a plot script and
// a fit report. Deterministic in (scale, base_seed).
RecipeResult run_recipe(const std::string& id, Scale scale, std::size_t threads,
                        std::uint64_t base_seed);

// ---- shared analysis helpers ---------------------------------------------

// Group table rows of one observable into per-size curves (identical p grids).
std::vector<fit::SizedCurve> curves_from(const mc::ResultTable& t, const std::string& obs);

// Per-size (Ltau, mean, se) curves of one observable.
std::vector<fit::DynCurve> dyn_curves_from(const mc::ResultTable& t, const std::string& obs);

// Disorder-averaged boundary observables on the free top boundary of a
// half-free cylinder: segment entropies symS^bd(L_A) and antipodal segment
// mutual information symI^bd(w), both averaged over segment anchors.
struct BoundaryProfile {
    std::vector<std::size_t> la_values;
    std::vector<mc::SlotStats> syms;      // one per la
    std::vector<std::size_t> pair_widths;
    std::vector<double> chi_values;       // cross-ratio of each antipodal pair
    std::vector<mc::SlotStats> symi;      // one per pair width
};

BoundaryProfile boundary_profile(model::Model m, std::size_t L, std::size_t Ltau, double p,
                                 std::size_t realizations, std::uint64_t base_seed,
                                 const std::vector<std::size_t>& la_values,
                                 const std::vector<std::size_t>& pair_widths,
                                 std::size_t translations, std::size_t threads);

// symI(top, bottom) of free-free cylinders over an explicit (L, Ltau) grid.
mc::ResultTable topbot_grid(model::Model m, const std::vector<std::size_t>& sizes,
                            const std::vector<double>& thetas, double z_grid, double p,
                            std::size_t realizations, std::uint64_t base_seed, std::size_t threads);

std::string metadata_header(const std::string& recipe, Scale scale, std::uint64_t seed);

} // namespace plaqsym::recipes
