#include "plaqsym/mc.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "plaqsym/ca.hpp"
#include "plaqsym/gf2.hpp"
#include "plaqsym/rng.hpp"
#include "plaqsym/symmetry.hpp"

namespace plaqsym::mc {

std::size_t SweepConfig::ltau_for(std::size_t size_index) const {
    const std::size_t L = sizes.at(size_index);
    switch (ltau_rule) {
        case LtauRule::Ratio:
            return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(ltau_param * static_cast<double>(L))));
        case LtauRule::Power:
            return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(
                                                std::pow(static_cast<double>(L), ltau_param))));
        case LtauRule::Explicit:
            return ltau_explicit.at(size_index);
    }
    throw std::logic_error("unreachable");
}

void SweepConfig::validate() const {
    if (sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    if (p_values.empty()) throw std::invalid_argument("sweep needs at least one p value");
    for (double p : p_values)
        if (p < 0 || p > 1) throw std::invalid_argument("p values must lie in [0,1]");
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (observables.empty()) throw std::invalid_argument("sweep needs observables");
    if (ltau_rule == LtauRule::Explicit && ltau_explicit.size() != sizes.size())
        throw std::invalid_argument("explicit ltau list must match the size list");
}

std::size_t default_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PLAQSYM_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::uint64_t cell_key(const model::LatticeGeometry& g, const model::BoundaryCondition& bc, double p) {
    std::uint64_t k = 0x706c617173796dull;
    k = counter_hash(k, static_cast<std::uint64_t>(g.model));
    k = counter_hash(k, static_cast<std::uint64_t>(g.topology));
    k = counter_hash(k, g.width);
    k = counter_hash(k, g.height);
    k = counter_hash(k, static_cast<std::uint64_t>(bc.top) * 2 + static_cast<std::uint64_t>(bc.bottom));
    std::uint64_t pbits;
    static_assert(sizeof(pbits) == sizeof(p));
    std::memcpy(&pbits, &p, sizeof(pbits));
    return counter_hash(k, pbits);
}

namespace {

struct Welford {
    std::size_t n = 0;
    double sum = 0, sumsq = 0;

    void add(double x) {
        if (std::isnan(x)) return;
        n += 1;
        sum += x;
        sumsq += x * x;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double se() const {
        if (n < 2) return 0.0;
        const double m = mean();
        double var = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        if (var < 0) var = 0;
        return std::sqrt(var / static_cast<double>(n));
    }
};

struct ObsSpec {
    std::string raw;
    std::string name;
    std::optional<std::size_t> param;
};

ObsSpec parse_obs(const std::string& s) {
    ObsSpec spec;
    spec.raw = s;
    const auto colon = s.find(':');
    spec.name = s.substr(0, colon);
    if (colon != std::string::npos) {
        const std::string arg = s.substr(colon + 1);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
        if (ec != std::errc() || ptr != arg.data() + arg.size())
            throw std::invalid_argument("bad observable parameter: " + s);
        spec.param = v;
    }
    return spec;
}

} // namespace

std::vector<double> evaluate_observables(const model::LatticeGeometry& g,
                                         const model::BoundaryCondition& bc, double p,
                                         std::uint64_t seed,
                                         const std::vector<std::string>& observables) {
    std::vector<ObsSpec> specs;
    specs.reserve(observables.size());
    bool needs_tableau = false, needs_rank = false, needs_ca = false, needs_q1 = false;
    for (const auto& s : observables) {
        auto spec = parse_obs(s);
        if (spec.name == "scf" || spec.name == "scf_density") {
            needs_rank = true;
        } else if (spec.name == "symi_ab" || spec.name == "syms_strip" || spec.name == "opsize") {
            needs_tableau = true;
        } else if (spec.name == "symi_topbot" || spec.name == "logg_bd") {
            needs_ca = true;
        } else if (spec.name == "syms_bd_half" || spec.name == "symi_bd_ab" || spec.name == "syms_bd") {
            needs_ca = true;
            needs_q1 = true;
        } else {
            throw std::invalid_argument("unknown observable: " + spec.name);
        }
        specs.push_back(std::move(spec));
    }

    const std::size_t N = g.sites();
    std::optional<sym::SymmetryTableau> tab;
    std::size_t scf = 0;
    if (needs_tableau) {
        tab = sym::solve_symmetry_group(model::assemble_parity_matrix(model::build_realization(g, bc, p, seed)));
        scf = sym::config_entropy(*tab);
    } else if (needs_rank) {
        const auto pm = model::assemble_parity_matrix(model::build_realization(g, bc, p, seed));
        scf = N - gf2::rank(pm);
    }

    std::optional<ca::CaRunResult> run;
    std::optional<gf2::BinMatrix> q1;
    if (needs_ca) {
        if (g.topology != model::Topology::Cylinder || bc.top != model::Edge::Free)
            throw std::invalid_argument("boundary observables need a free-top cylinder");
        run = ca::run_dynamics(g.model, g.width, g.height, p, seed);
        if (needs_q1) {
            if (bc.bottom != model::Edge::Fixed)
                throw std::invalid_argument("free-boundary entropies need a fixed bottom edge");
            q1 = ca::apply_fixed_boundary(run->tableau);
        }
    }

    std::vector<double> out;
    out.reserve(specs.size());
    for (const auto& spec : specs) {
        if (spec.name == "scf") {
            out.push_back(static_cast<double>(scf));
        } else if (spec.name == "scf_density") {
            out.push_back(static_cast<double>(scf) / static_cast<double>(N));
        } else if (spec.name == "symi_ab") {
            const std::size_t w = spec.param.value_or(g.model == model::Model::RXPM ? 2 : 1);
            auto [a, b] = model::antipodal_pair(g, w);
            out.push_back(static_cast<double>(sym::sym_mutual_info_cond(*tab, a, b)));
        } else if (spec.name == "syms_strip") {
            const std::size_t la = spec.param.value_or(g.width / 2);
            out.push_back(static_cast<double>(sym::sym_entropy(*tab, g, model::vertical_strip(g, la))));
        } else if (spec.name == "opsize") {
            if (sym::config_entropy(*tab) == 0) {
                out.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                std::mt19937_64 rng(splitmix64(seed ^ 0x6f70u));
                out.push_back(sym::operator_size(*tab, rng, spec.param.value_or(64)));
            }
        } else if (spec.name == "symi_topbot") {
            if (bc.bottom != model::Edge::Free)
                throw std::invalid_argument("symi_topbot needs two free boundaries");
            out.push_back(static_cast<double>(ca::dynamic_top_bottom_mi(run->tableau)));
        } else if (spec.name == "logg_bd") {
            if (bc.bottom == model::Edge::Fixed)
                out.push_back(static_cast<double>(gf2::rank(*q1)));
            else
                out.push_back(static_cast<double>(
                    gf2::rank(gf2::hstack(run->tableau.t0, run->tableau.t_tau))));
        } else if (spec.name == "syms_bd_half") {
            const auto cols = ca::top_segment_cols(g.model, g.width, 0, g.width / 2);
            out.push_back(static_cast<double>(ca::block_entropy(*q1, cols)));
        } else if (spec.name == "syms_bd") {
            const std::size_t la = spec.param.value_or(g.width / 2);
            const auto cols = ca::top_segment_cols(g.model, g.width, 0, la);
            out.push_back(static_cast<double>(ca::block_entropy(*q1, cols)));
        } else if (spec.name == "symi_bd_ab") {
            const std::size_t w = spec.param.value_or(std::max<std::size_t>(1, g.width / 8));
            const auto ca_cols = ca::top_segment_cols(g.model, g.width, 0, w);
            const auto cb_cols = ca::top_segment_cols(g.model, g.width, g.width / 2, g.width / 2 + w);
            auto ab = ca_cols;
            ab.insert(ab.end(), cb_cols.begin(), cb_cols.end());
            std::sort(ab.begin(), ab.end());
            const double sa = static_cast<double>(ca::block_entropy(*q1, ca_cols));
            const double sb = static_cast<double>(ca::block_entropy(*q1, cb_cols));
            const double sab = static_cast<double>(ca::block_entropy(*q1, ab));
            out.push_back(sa + sb - sab);
        }
    }
    return out;
}

std::vector<SlotStats> ensemble(std::size_t n_values, std::size_t realizations, std::size_t rep_offset,
                                std::uint64_t base_seed, std::uint64_t key, std::size_t threads,
                                const std::function<std::vector<double>(std::uint64_t, std::size_t)>& f) {
    const std::size_t nt = std::min(default_threads(threads), realizations);
    std::vector<std::vector<double>> values(realizations);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= realizations) break;
            const std::size_t rep = rep_offset + k;
            const std::uint64_t seed = base_seed ^ counter_hash(key, rep);
            values[k] = f(seed, rep);
        }
    };
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<Welford> acc(n_values);
    for (std::size_t k = 0; k < realizations; ++k) {
        if (values[k].size() != n_values) throw std::logic_error("ensemble: value count mismatch");
        for (std::size_t v = 0; v < n_values; ++v) acc[v].add(values[k][v]);
    }
    std::vector<SlotStats> out(n_values);
    for (std::size_t v = 0; v < n_values; ++v) out[v] = {acc[v].mean(), acc[v].se(), acc[v].n};
    return out;
}

ResultTable run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    ResultTable table;
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        const std::size_t L = cfg.sizes[si];
        const std::size_t Lt = cfg.ltau_for(si);
        model::LatticeGeometry g{cfg.mdl, cfg.topology, L, Lt};
        g.validate();
        for (double p : cfg.p_values) {
            const auto t0 = std::chrono::steady_clock::now();
            const std::uint64_t key = cell_key(g, cfg.bc, p);
            auto stats = ensemble(
                cfg.observables.size(), cfg.realizations, cfg.rep_offset, cfg.base_seed, key,
                cfg.threads, [&](std::uint64_t seed, std::size_t) {
                    return evaluate_observables(g, cfg.bc, p, seed, cfg.observables);
                });
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (std::size_t v = 0; v < cfg.observables.size(); ++v) {
                ResultRow row;
                row.model = model::to_string(cfg.mdl);
                row.L = L;
                row.Ltau = Lt;
                row.p = p;
                row.obs = cfg.observables[v];
                row.mean = stats[v].mean;
                row.se = stats[v].se;
                row.n = stats[v].n;
                row.seed0 = cfg.rep_offset;
                row.seed1 = cfg.rep_offset + cfg.realizations;
                row.secs = secs;
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

bool ResultTable::data_equals(const ResultTable& other) const {
    if (rows.size() != other.rows.size()) return false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = other.rows[i];
        if (a.model != b.model || a.L != b.L || a.Ltau != b.Ltau || a.p != b.p || a.obs != b.obs ||
            a.mean != b.mean || a.se != b.se || a.n != b.n || a.seed0 != b.seed0 || a.seed1 != b.seed1)
            return false;
    }
    return true;
}

ResultTable merge(const std::vector<ResultTable>& tables) {
    struct CellAgg {
        ResultRow first;
        std::size_t n = 0;
        double sum = 0, sumsq = 0, secs = 0;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    };
    std::map<std::string, CellAgg> cells;
    std::vector<std::string> order;
    for (const auto& t : tables) {
        for (const auto& row : t.rows) {
            std::ostringstream key;
            key.precision(17);
            key << row.model << '|' << row.L << '|' << row.Ltau << '|' << row.p << '|' << row.obs;
            auto [it, fresh] = cells.try_emplace(key.str());
            if (fresh) {
                it->second.first = row;
                order.push_back(key.str());
            }
            for (auto [a, b] : it->second.ranges)
                if (row.seed0 < b && a < row.seed1)
                    throw std::invalid_argument("merge: overlapping replicate ranges for " + key.str());
            it->second.ranges.emplace_back(row.seed0, row.seed1);
            const double n = static_cast<double>(row.n);
            it->second.n += row.n;
            it->second.sum += n * row.mean;
            it->second.sumsq += row.se * row.se * n * (n - 1) + n * row.mean * row.mean;
            it->second.secs += row.secs;
        }
    }
    ResultTable out;
    for (const auto& key : order) {
        const auto& agg = cells.at(key);
        ResultRow row = agg.first;
        row.n = agg.n;
        const double n = static_cast<double>(agg.n);
        row.mean = agg.n ? agg.sum / n : 0.0;
        if (agg.n >= 2) {
            double var = (agg.sumsq - n * row.mean * row.mean) / (n - 1);
            if (var < 0) var = 0;
            row.se = std::sqrt(var / n);
        } else {
            row.se = 0;
        }
        std::uint64_t lo = ~std::uint64_t{0}, hi = 0;
        for (auto [a, b] : agg.ranges) {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        row.seed0 = lo;
        row.seed1 = hi;
        row.secs = agg.secs;
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

void write_row_fields(std::ostream& os, const ResultRow& r) {
    os.precision(17);
    os << r.model << ',' << r.L << ',' << r.Ltau << ',' << r.p << ',' << r.obs << ',' << r.mean << ','
       << r.se << ',' << r.n << ',' << r.seed0 << ',' << r.seed1 << ',' << r.secs << '\n';
}

} // namespace

void write_csv(const ResultTable& t, std::ostream& os) {
    os << "model,L,Ltau,p,obs,mean,se,n,seed0,seed1,secs\n";
    for (const auto& row : t.rows) write_row_fields(os, row);
}

ResultTable read_csv(std::istream& is) {
    ResultTable t;
    std::string line;
    // metadata comment lines may precede the header
    while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
    }
    if (line != "model,L,Ltau,p,obs,mean,se,n,seed0,seed1,secs")
        throw std::runtime_error("unexpected csv header: " + line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        ResultRow r;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) throw std::runtime_error("short csv row: " + line);
            return field;
        };
        r.model = next();
        r.L = std::stoull(next());
        r.Ltau = std::stoull(next());
        r.p = std::stod(next());
        r.obs = next();
        r.mean = std::stod(next());
        r.se = std::stod(next());
        r.n = std::stoull(next());
        r.seed0 = std::stoull(next());
        r.seed1 = std::stoull(next());
        r.secs = std::stod(next());
        t.rows.push_back(std::move(r));
    }
    return t;
}

void write_json(const ResultTable& t, std::ostream& os) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : t.rows) {
        arr.push_back({{"model", r.model},
                       {"L", r.L},
                       {"Ltau", r.Ltau},
                       {"p", r.p},
                       {"obs", r.obs},
                       {"mean", r.mean},
                       {"se", r.se},
                       {"n", r.n},
                       {"seed0", r.seed0},
                       {"seed1", r.seed1},
                       {"secs", r.secs}});
    }
    os << arr.dump(2) << '\n';
}

SweepConfig parse_sweep_config(std::istream& is) {
    SweepConfig cfg;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string eq;
        ls >> eq;
        if (eq != "=") throw std::runtime_error("expected 'key = value': " + line);
        if (key == "model") {
            std::string v;
            ls >> v;
            cfg.mdl = model::parse_model(v);
        } else if (key == "topology") {
            std::string v;
            ls >> v;
            cfg.topology = model::parse_topology(v);
        } else if (key == "bc") {
            std::string a, b;
            ls >> a >> b;
            cfg.bc = {model::parse_edge(a), model::parse_edge(b)};
        } else if (key == "L") {
            std::size_t v;
            while (ls >> v) cfg.sizes.push_back(v);
        } else if (key == "ltau") {
            std::string kind;
            ls >> kind;
            if (kind == "ratio") {
                cfg.ltau_rule = LtauRule::Ratio;
                ls >> cfg.ltau_param;
            } else if (kind == "power") {
                cfg.ltau_rule = LtauRule::Power;
                ls >> cfg.ltau_param;
            } else if (kind == "explicit") {
                cfg.ltau_rule = LtauRule::Explicit;
                std::size_t v;
                while (ls >> v) cfg.ltau_explicit.push_back(v);
            } else {
                throw std::runtime_error("ltau must be ratio/power/explicit");
            }
        } else if (key == "p") {
            std::string first;
            ls >> first;
            if (first == "range") {
                double a, b, step;
                if (!(ls >> a >> b >> step) || step <= 0) throw std::runtime_error("bad p range");
                for (double v = a; v <= b + 1e-12; v += step) cfg.p_values.push_back(v);
            } else {
                cfg.p_values.push_back(std::stod(first));
                double v;
                while (ls >> v) cfg.p_values.push_back(v);
            }
        } else if (key == "realizations") {
            ls >> cfg.realizations;
        } else if (key == "offset") {
            ls >> cfg.rep_offset;
        } else if (key == "seed") {
            ls >> cfg.base_seed;
        } else if (key == "observables") {
            std::string v;
            while (ls >> v) cfg.observables.push_back(v);
        } else if (key == "threads") {
            ls >> cfg.threads;
        } else {
            throw std::runtime_error("unknown sweep key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

} // namespace plaqsym::mc
