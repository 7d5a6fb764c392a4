#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plaqsym/ca.hpp"
#include "plaqsym/fit.hpp"
#include "plaqsym/gf2.hpp"
#include "plaqsym/mc.hpp"
#include "plaqsym/model.hpp"
#include "plaqsym/recipes.hpp"
#include "plaqsym/rng.hpp"
#include "plaqsym/stabilizer.hpp"
#include "plaqsym/symmetry.hpp"
#include "plaqsym/version.hpp"

namespace {

using namespace plaqsym;
using nlohmann::json;

json meta(const std::string& command, const json& flags) {
    return {{"version", kVersion}, {"command", command}, {"flags", flags}};
}

struct GeometryFlags {
    std::string model = "rtpm";
    std::string topology = "torus";
    std::size_t L = 8, Ltau = 8;
    std::string bc_top = "free", bc_bottom = "free";
    double p = 0.5;
    std::uint64_t seed = 1;

    model::LatticeGeometry geometry() const {
        return {model::parse_model(model), model::parse_topology(topology), L, Ltau};
    }
    model::BoundaryCondition bc() const {
        return {model::parse_edge(bc_top), model::parse_edge(bc_bottom)};
    }
    json flags() const {
        return {{"model", model}, {"topology", topology}, {"L", L},       {"Ltau", Ltau},
                {"bc", bc_top + " " + bc_bottom},         {"p", p},       {"seed", seed}};
    }
};

void add_geometry_flags(CLI::App* cmd, GeometryFlags& g, bool with_topology = true) {
    cmd->add_option("--model", g.model, "rtpm or rxpm")->required();
    cmd->add_option("--L", g.L, "lattice width")->required();
    cmd->add_option("--Ltau", g.Ltau, "lattice height")->required();
    if (with_topology) cmd->add_option("--topology", g.topology, "torus or cylinder");
    cmd->add_option("--bc", g.bc_bottom, "bottom edge of a cylinder: free or fixed");
    cmd->add_option("--p", g.p, "plaquette probability")->required();
    cmd->add_option("--seed", g.seed, "realization seed");
}

int cmd_sample(const GeometryFlags& g, const std::vector<std::string>& obs,
               const std::string& export_path) {
    auto geom = g.geometry();
    geom.validate();
    auto vals = mc::evaluate_observables(geom, g.bc(), g.p, g.seed, obs);
    json out;
    out["meta"] = meta("sample", g.flags());
    for (std::size_t k = 0; k < obs.size(); ++k) out["values"][obs[k]] = vals[k];
    if (!export_path.empty()) {
        std::ofstream f(export_path);
        model::write_realization(model::build_realization(geom, g.bc(), g.p, g.seed), f);
        out["exported"] = export_path;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_csv, const std::string& out_json,
              std::size_t threads) {
    std::ifstream f(config_path);
    if (!f) throw std::runtime_error("cannot open config: " + config_path);
    auto cfg = mc::parse_sweep_config(f);
    if (threads) cfg.threads = threads;
    auto table = mc::run_sweep(cfg);
    if (!out_csv.empty()) {
        std::ofstream o(out_csv);
        o << "# plaqsym " << kVersion << " sweep config=" << config_path << " seed=" << cfg.base_seed
          << "\n";
        mc::write_csv(table, o);
    } else {
        mc::write_csv(table, std::cout);
    }
    if (!out_json.empty()) {
        std::ofstream o(out_json);
        mc::write_json(table, o);
    }
    return 0;
}

int cmd_dynamics(const GeometryFlags& g, const std::string& snapshot_path) {
    ca::CaOptions opts;
    opts.record_snapshot = !snapshot_path.empty();
    auto run = ca::run_dynamics(model::parse_model(g.model), g.L, g.Ltau, g.p, g.seed, opts);
    json out;
    out["meta"] = meta("dynamics", g.flags());
    out["n_impurities"] = run.n_impurities;
    out["n_generators"] = run.n_generators;
    out["log_g_bd"] = gf2::rank(gf2::hstack(run.tableau.t0, run.tableau.t_tau));
    out["symi_topbot"] = ca::dynamic_top_bottom_mi(run.tableau);
    auto q1 = ca::apply_fixed_boundary(run.tableau);
    out["fixed_bottom"]["log_g_bd"] = gf2::rank(q1);
    out["fixed_bottom"]["syms_bd_half"] = ca::block_entropy(
        q1, ca::top_segment_cols(model::parse_model(g.model), g.L, 0, g.L / 2));
    if (!snapshot_path.empty()) {
        std::ofstream o(snapshot_path);
        for (const auto& line : run.snapshot) o << line << "\n";
        out["snapshot"] = snapshot_path;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_snapshot(const GeometryFlags& g, const std::string& out_path) {
    ca::CaOptions opts;
    opts.record_snapshot = true;
    auto run = ca::run_dynamics(model::parse_model(g.model), g.L, g.Ltau, g.p, g.seed, opts);
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
    }
    for (const auto& line : run.snapshot) *os << line << "\n";
    return 0;
}

int cmd_xcheck(std::size_t L, std::size_t Ltau, double p, std::uint64_t seed, std::size_t count) {
    json out;
    out["meta"] = meta("xcheck", {{"L", L}, {"Ltau", Ltau}, {"p", p}, {"seed", seed}, {"count", count}});
    std::size_t parity_fail = 0, violations = 0, intervals = 0;
    int max_gap = std::numeric_limits<int>::min();
    for (std::size_t k = 0; k < count; ++k) {
        model::LatticeGeometry g{model::Model::RXPM, model::Topology::Cylinder, L, Ltau};
        auto r = model::build_realization(g, {model::Edge::Free, model::Edge::Free}, p,
                                          seed ^ counter_hash(0x78636865636bull, k));
        auto rep = stab::check_equivalence(r, splitmix64(seed + k));
        if (!rep.parity_match) ++parity_fail;
        violations += rep.violations;
        intervals += rep.intervals;
        max_gap = std::max(max_gap, rep.max_two_sided_gap);
    }
    out["realizations"] = count;
    out["parity_mismatches"] = parity_fail;
    out["intervals_checked"] = intervals;
    out["bound_violations"] = violations;
    out["max_gap_minus_allowance"] = max_gap;
    std::cout << out.dump(2) << "\n";
    return (parity_fail == 0 && violations == 0) ? 0 : 1;
}

int cmd_fit(const std::string& csv_path, const std::string& kind, const std::string& obs, double p0,
            double nu0, double z0, bool fix_z, const std::string& out_path) {
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open csv: " + csv_path);
    auto table = mc::read_csv(f);
    json out;
    out["meta"] = meta("fit", {{"csv", csv_path}, {"kind", kind}, {"obs", obs}});
    if (kind == "crossing") {
        auto res = fit::estimate_crossing(recipes::curves_from(table, obs), 1, 200);
        out["p_c"] = {{"value", res.p_c.value}, {"error", res.p_c.error}};
        out["pairs"] = res.n_pairs;
    } else if (kind == "collapse") {
        fit::CollapseOptions opts;
        opts.n_boot = 60;
        auto res = fit::fit_collapse(recipes::curves_from(table, obs), p0, nu0, opts);
        out["p_c"] = {{"value", res.p_c.value}, {"error", res.p_c.error}};
        out["nu"] = {{"value", res.nu.value}, {"error", res.nu.error}};
        out["quality"] = res.quality;
        out["converged"] = res.converged;
        if (!out_path.empty()) {
            std::ofstream o(out_path + ".scaled.csv");
            o << "x,y,se,L\n";
            o.precision(17);
            for (const auto& s : res.scaled) o << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << "\n";
            out["scaled_csv"] = out_path + ".scaled.csv";
        }
    } else if (kind == "dynamic") {
        fit::DynamicOptions opts;
        opts.fit_z = !fix_z;
        opts.z0 = z0;
        auto res = fit::fit_dynamic_collapse(recipes::dyn_curves_from(table, obs), opts);
        out["z"] = {{"value", res.z.value}, {"error", res.z.error}};
        out["h0"] = {{"value", res.h0.value}, {"error", res.h0.error}};
        out["h1"] = {{"value", res.h1.value}, {"error", res.h1.error}};
        out["quality"] = res.quality;
    } else {
        throw CLI::ValidationError("--kind must be crossing, collapse or dynamic");
    }
    if (!out_path.empty()) {
        std::ofstream o(out_path);
        o << out.dump(2) << "\n";
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_reproduce(const std::string& id, const std::string& scale, const std::string& out_dir,
                  std::uint64_t seed, std::size_t threads) {
    auto res = recipes::run_recipe(id, recipes::parse_scale(scale), threads, seed);
    std::filesystem::create_directories(out_dir);
    for (const auto& file : res.files) {
        std::ofstream o(std::filesystem::path(out_dir) / file.name);
        o << file.content;
    }
    std::cout << res.summary;
    std::cout << res.files.size() << " files written to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"plaqsym: randomized plaquette models, their cellular automata, and boundary criticality"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GeometryFlags gs;
    std::vector<std::string> obs{"scf"};
    std::string export_path;
    auto* sample = app.add_subcommand("sample", "exact observables of one disorder realization");
    add_geometry_flags(sample, gs);
    sample->add_option("--obs", obs, "observables, e.g. scf symi_ab:1 syms_strip:4")->delimiter(',');
    sample->add_option("--export", export_path, "write the realization record to this path");

    std::string config_path, out_csv, out_json;
    std::size_t threads = 0;
    auto* sweepc = app.add_subcommand("sweep", "disorder-averaged parameter sweep from a config file");
    sweepc->add_option("--config", config_path, "sweep config file")->required();
    sweepc->add_option("--out", out_csv, "output CSV (stdout if omitted)");
    sweepc->add_option("--json", out_json, "JSON mirror of the results");
    sweepc->add_option("--threads", threads, "worker threads (0: PLAQSYM_THREADS or all cores)");

    GeometryFlags gd;
    std::string snapshot_path;
    auto* dynamics = app.add_subcommand("dynamics", "evolve the boundary generators of a cylinder");
    add_geometry_flags(dynamics, gd, /*with_topology=*/false);
    dynamics->add_option("--snapshot", snapshot_path, "also write the space-time grid to this path");

    GeometryFlags gsnap;
    std::string snap_out;
    auto* snapshot = app.add_subcommand("snapshot", "space-time snapshot of one CA evolution");
    add_geometry_flags(snapshot, gsnap, /*with_topology=*/false);
    snapshot->add_option("--out", snap_out, "output path (stdout if omitted)");

    std::size_t xL = 8, xLtau = 8, xcount = 10;
    double xp = 0.743;
    std::uint64_t xseed = 1;
    auto* xcheck = app.add_subcommand("xcheck", "stabilizer cross-check on matched RXPM realizations");
    xcheck->add_option("--L", xL, "cylinder width");
    xcheck->add_option("--Ltau", xLtau, "cylinder height");
    xcheck->add_option("--p", xp, "Y-measurement probability");
    xcheck->add_option("--seed", xseed, "base seed");
    xcheck->add_option("--count", xcount, "number of matched realizations");

    std::string fit_csv, fit_kind = "crossing", fit_obs = "scf", fit_out;
    double fit_p0 = 0.8, fit_nu0 = 1.2, fit_z0 = 1.0;
    bool fit_fixz = false;
    auto* fitc = app.add_subcommand("fit", "crossing / collapse / dynamic fits of sweep tables");
    fitc->add_option("--csv", fit_csv, "result table CSV")->required();
    fitc->add_option("--kind", fit_kind, "crossing, collapse or dynamic");
    fitc->add_option("--obs", fit_obs, "observable column to fit");
    fitc->add_option("--p0", fit_p0, "collapse initial p_c");
    fitc->add_option("--nu0", fit_nu0, "collapse initial nu");
    fitc->add_option("--z0", fit_z0, "dynamic collapse initial z");
    fitc->add_flag("--fix-z", fit_fixz, "hold z at --z0");
    fitc->add_option("--out", fit_out, "write the fit report here");

    std::string rep_id, rep_scale = "desk", rep_out = "out";
    std::uint64_t rep_seed = 1;
    std::size_t rep_threads = 0;
    auto* reproduce = app.add_subcommand("reproduce", "scaled-down reproduction pipelines");
    reproduce->add_option("figure", rep_id, "one of: fig4 fig5 fig6 fig10 fig13 fig15 fig18 fig19 table1")
        ->required();
    reproduce->add_option("--scale", rep_scale, "quick or desk");
    reproduce->add_option("--out", rep_out, "output directory");
    reproduce->add_option("--seed", rep_seed, "base seed");
    reproduce->add_option("--threads", rep_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (*sample) return cmd_sample(gs, obs, export_path);
        if (*sweepc) return cmd_sweep(config_path, out_csv, out_json, threads);
        if (*dynamics) {
            gd.topology = "cylinder";
            return cmd_dynamics(gd, snapshot_path);
        }
        if (*snapshot) {
            gsnap.topology = "cylinder";
            return cmd_snapshot(gsnap, snap_out);
        }
        if (*xcheck) return cmd_xcheck(xL, xLtau, xp, xseed, xcount);
        if (*fitc) return cmd_fit(fit_csv, fit_kind, fit_obs, fit_p0, fit_nu0, fit_z0, fit_fixz, fit_out);
        if (*reproduce) return cmd_reproduce(rep_id, rep_scale, rep_out, rep_seed, rep_threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
