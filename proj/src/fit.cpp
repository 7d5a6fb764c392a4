#include "plaqsym/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "plaqsym/rng.hpp"

namespace plaqsym::fit {

namespace {

constexpr double kPi = std::numbers::pi;

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct ScaledPoint {
    double x, y, se, size;
    std::size_t curve;
};

// Mean squared residual of each point against the linear interpolant of its
// bracketing neighbours from other curves, normalized by the overall y
// variance so the value is invariant under affine rescaling of the
// observable.
double spread(std::vector<ScaledPoint>& pts, bool se_weighted = false) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    double ysum = 0, ysumsq = 0;
    for (const auto& p : pts) {
        ysum += p.y;
        ysumsq += p.y * p.y;
    }
    const double np = static_cast<double>(pts.size());
    const double yvar = np > 1 ? std::max(ysumsq / np - (ysum / np) * (ysum / np), 1e-300) : 1.0;

    double total = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t jl = pts.size(), jr = pts.size();
        for (std::size_t j = i; j-- > 0;)
            if (pts[j].curve != pts[i].curve) {
                jl = j;
                break;
            }
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[j].curve != pts[i].curve) {
                jr = j;
                break;
            }
        if (jl == pts.size() || jr == pts.size()) continue;
        const auto& l = pts[jl];
        const auto& r = pts[jr];
        const double dx = r.x - l.x;
        const double t = dx > 1e-30 ? (pts[i].x - l.x) / dx : 0.5;
        const double yhat = l.y + t * (r.y - l.y);
        const double d = pts[i].y - yhat;
        if (se_weighted) {
            const double var = pts[i].se * pts[i].se + (1 - t) * (1 - t) * l.se * l.se +
                               t * t * r.se * r.se;
            total += d * d / std::max(var, 1e-12);
        } else {
            total += d * d;
        }
        ++count;
    }
    if (count == 0) return 0.0;
    return se_weighted ? total / static_cast<double>(count)
                       : total / static_cast<double>(count) / yvar;
}

std::vector<ScaledPoint> scale_points(const std::vector<SizedCurve>& curves, double p_c, double nu) {
    std::vector<ScaledPoint> pts;
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (const auto& pt : curves[c].pts)
            pts.push_back({(pt.p - p_c) * std::pow(curves[c].size, 1.0 / nu), pt.y, pt.se,
                           curves[c].size, c});
    return pts;
}

std::vector<SizedCurve> perturb(const std::vector<SizedCurve>& curves, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    auto out = curves;
    for (auto& c : out)
        for (auto& pt : c.pts) pt.y += pt.se * gauss(rng);
    return out;
}

} // namespace

double collapse_quality(const std::vector<SizedCurve>& curves, double p_c, double nu) {
    auto pts = scale_points(curves, p_c, nu);
    return spread(pts);
}

namespace {

double quality_opt(const std::vector<SizedCurve>& curves, double p_c, double nu,
                   const CollapseOptions& opts) {
    auto pts = scale_points(curves, p_c, nu);
    if (opts.window_x > 0) {
        std::erase_if(pts, [&](const ScaledPoint& p) { return std::abs(p.x) > opts.window_x; });
        std::size_t distinct = 0;
        std::size_t seen_mask = 0;
        for (const auto& p : pts) {
            if (!(seen_mask >> p.curve & 1u)) {
                seen_mask |= std::size_t{1} << p.curve;
                ++distinct;
            }
        }
        if (distinct < 2 || pts.size() < 4) return 1e12;
    }
    return spread(pts, opts.se_weighted);
}

} // namespace

namespace {

double crossing_once(const std::vector<SizedCurve>& curves, std::size_t* pairs_out) {
    double acc = 0, wacc = 0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < curves.size(); ++a) {
        for (std::size_t b = a + 1; b < curves.size(); ++b) {
            double best_w = -1, best_p = 0;
            // difference of the two curves on their common p grid
            std::vector<std::pair<double, double>> diff; // (p, ya-yb)
            for (const auto& pa : curves[a].pts)
                for (const auto& pb : curves[b].pts)
                    if (std::abs(pa.p - pb.p) < 1e-12) diff.emplace_back(pa.p, pa.y - pb.y);
            std::sort(diff.begin(), diff.end());
            for (std::size_t k = 0; k + 1 < diff.size(); ++k) {
                const auto [p0, d0] = diff[k];
                const auto [p1, d1] = diff[k + 1];
                if (d0 == 0 && d1 == 0) continue;
                if (d0 * d1 <= 0 && (d0 != d1)) {
                    const double pc = p0 + d0 * (p1 - p0) / (d0 - d1);
                    const double w = (d0 - d1) * (d0 - d1);
                    if (w > best_w) {
                        best_w = w;
                        best_p = pc;
                    }
                }
            }
            if (best_w >= 0) {
                acc += best_w * best_p;
                wacc += best_w;
                ++pairs;
            }
        }
    }
    if (pairs == 0) throw std::runtime_error("curves do not cross in range");
    if (pairs_out) *pairs_out = pairs;
    return acc / wacc;
}

} // namespace

CrossingResult estimate_crossing(const std::vector<SizedCurve>& curves, std::uint64_t boot_seed,
                                 std::size_t n_boot) {
    if (curves.size() < 2) throw std::invalid_argument("crossing needs at least two sizes");
    CrossingResult res;
    res.p_c.value = crossing_once(curves, &res.n_pairs);
    if (n_boot >= 2) {
        std::mt19937_64 rng(splitmix64(boot_seed));
        std::vector<double> samples;
        samples.reserve(n_boot);
        for (std::size_t k = 0; k < n_boot; ++k) {
            auto pert = perturb(curves, rng);
            try {
                samples.push_back(crossing_once(pert, nullptr));
            } catch (const std::runtime_error&) {
                // a resample may fail to cross; skip it
            }
        }
        if (samples.size() >= 2) {
            double m = 0;
            for (double s : samples) m += s;
            m /= static_cast<double>(samples.size());
            double var = 0;
            for (double s : samples) var += (s - m) * (s - m);
            res.p_c.error = std::sqrt(var / static_cast<double>(samples.size() - 1));
        }
    }
    return res;
}

namespace {

std::pair<double, double> descend(const std::vector<SizedCurve>& curves, double p0, double nu0,
                                  const CollapseOptions& opts, bool* converged) {
    double pc = p0, nu = nu0;
    // bounds stay anchored at the initial guess
    const double pc_lo = p0 - opts.span_pc, pc_hi = p0 + opts.span_pc;
    const double nu_lo = std::max(0.05, nu0 - opts.span_nu), nu_hi = nu0 + opts.span_nu;
    if (converged) *converged = false;
    for (std::size_t round = 0; round < opts.max_rounds; ++round) {
        const double pc_new = golden_min(
            [&](double x) { return quality_opt(curves, x, nu, opts); }, pc_lo, pc_hi, opts.tol / 4);
        const double nu_new = golden_min(
            [&](double x) { return quality_opt(curves, pc_new, x, opts); }, nu_lo, nu_hi,
            opts.tol / 4);
        const bool done = std::abs(pc_new - pc) < opts.tol && std::abs(nu_new - nu) < opts.tol;
        pc = pc_new;
        nu = nu_new;
        if (done) {
            if (converged) *converged = true;
            break;
        }
    }
    return {pc, nu};
}

} // namespace

CollapseFit fit_collapse(const std::vector<SizedCurve>& curves, double p0, double nu0,
                         const CollapseOptions& opts) {
    if (curves.size() < 3) throw std::invalid_argument("collapse needs at least three sizes");
    CollapseFit res;
    auto [pc, nu] = descend(curves, p0, nu0, opts, &res.converged);
    res.p_c.value = pc;
    res.nu.value = nu;
    res.quality = quality_opt(curves, pc, nu, opts);
    for (const auto& sp : scale_points(curves, pc, nu))
        res.scaled.push_back({sp.x, sp.y, sp.se, sp.size});
    if (opts.n_boot >= 2) {
        std::mt19937_64 rng(splitmix64(opts.boot_seed));
        CollapseOptions fast = opts;
        fast.max_rounds = std::max<std::size_t>(8, opts.max_rounds / 4);
        std::vector<double> pcs, nus;
        for (std::size_t k = 0; k < opts.n_boot; ++k) {
            auto pert = perturb(curves, rng);
            auto [bpc, bnu] = descend(pert, pc, nu, fast, nullptr);
            pcs.push_back(bpc);
            nus.push_back(bnu);
        }
        auto stddev = [](const std::vector<double>& v) {
            double m = 0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            double var = 0;
            for (double x : v) var += (x - m) * (x - m);
            return std::sqrt(var / static_cast<double>(v.size() - 1));
        };
        res.p_c.error = stddev(pcs);
        res.nu.error = stddev(nus);
    }
    return res;
}

DynamicCollapse fit_dynamic_collapse(const std::vector<DynCurve>& curves, const DynamicOptions& opts) {
    if (curves.empty()) throw std::invalid_argument("dynamic collapse needs data");
    DynamicCollapse res;
    res.early_max = opts.early_max;
    res.late_min = opts.late_min;

    auto log_curves_at = [&](double z) {
        std::vector<SizedCurve> lc;
        for (const auto& c : curves) {
            SizedCurve sc;
            sc.size = c.size;
            const double lz = std::pow(c.size, z);
            for (const auto& pt : c.pts) {
                if (pt.y <= 0) continue;
                // log-log master curve; errors propagate as se/y
                sc.pts.push_back({std::log(pt.ltau / lz), std::log(pt.y), pt.se / pt.y});
            }
            if (sc.pts.size() >= 2) lc.push_back(std::move(sc));
        }
        return lc;
    };
    auto quality_at = [&](double z) {
        auto lc = log_curves_at(z);
        if (lc.size() < 2) return 1e9;
        std::vector<ScaledPoint> pts;
        for (std::size_t c = 0; c < lc.size(); ++c)
            for (const auto& pt : lc[c].pts) pts.push_back({pt.p, pt.y, pt.se, lc[c].size, c});
        return spread(pts);
    };

    double z = opts.z0;
    if (opts.fit_z) {
        for (std::size_t round = 0; round < opts.max_rounds; ++round) {
            const double z_new =
                golden_min(quality_at, std::max(0.1, z - opts.span_z), z + opts.span_z, opts.tol / 4);
            const bool done = std::abs(z_new - z) < opts.tol;
            z = z_new;
            if (done) break;
        }
    }
    res.z.value = z;
    res.quality = quality_at(z);

    // early window: y = pi h0 theta^{-1/z}
    double h0_acc = 0, h0_w = 0;
    for (const auto& c : curves) {
        const double lz = std::pow(c.size, z);
        for (const auto& pt : c.pts) {
            const double theta = pt.ltau / lz;
            if (theta >= opts.early_max || pt.y <= 0) continue;
            const double est = pt.y * std::pow(theta, 1.0 / z) / kPi;
            const double sigma = std::max(pt.se * std::pow(theta, 1.0 / z) / kPi, 1e-9);
            h0_acc += est / (sigma * sigma);
            h0_w += 1.0 / (sigma * sigma);
        }
    }
    if (h0_w > 0) {
        res.h0.value = h0_acc / h0_w;
        res.h0.error = std::sqrt(1.0 / h0_w);
    }

    // late window: ln y = a - h1 2pi theta, weighted least squares
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t late_points = 0;
    for (const auto& c : curves) {
        const double lz = std::pow(c.size, z);
        for (const auto& pt : c.pts) {
            const double theta = pt.ltau / lz;
            if (theta <= opts.late_min || pt.y <= 0) continue;
            const double w = pt.se > 0 ? (pt.y / pt.se) * (pt.y / pt.se) : 1.0;
            const double x = theta, yv = std::log(pt.y);
            sw += w;
            sx += w * x;
            sy += w * yv;
            sxx += w * x * x;
            sxy += w * x * yv;
            ++late_points;
        }
    }
    if (late_points >= 2 && sw * sxx - sx * sx > 1e-30) {
        const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
        res.h1.value = -slope / (2 * kPi);
        res.h1.error = std::sqrt(sw / (sw * sxx - sx * sx)) / (2 * kPi);
    }
    return res;
}

double cross_ratio(double x1, double x2, double x3, double x4, double L) {
    auto chord = [L](double a, double b) { return (L / kPi) * std::abs(std::sin(kPi * (a - b) / L)); };
    const double x12 = chord(x1, x2), x34 = chord(x3, x4);
    const double x13 = chord(x1, x3), x24 = chord(x2, x4);
    if (x13 < 1e-12 || x24 < 1e-12) throw std::invalid_argument("cross_ratio: coincident points");
    return x12 * x34 / (x13 * x24);
}

LogSinFit fit_log_sin(const std::vector<std::pair<double, double>>& la_y, double L,
                      bool chord_prefactor) {
    if (la_y.size() < 3) throw std::invalid_argument("fit_log_sin needs at least three points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(la_y.size());
    for (auto [la, y] : la_y) {
        const double s = std::sin(kPi * la / L);
        if (s <= 0) throw std::invalid_argument("fit_log_sin: la outside (0, L)");
        const double x = std::log2(chord_prefactor ? (L / kPi) * s : s);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw std::invalid_argument("fit_log_sin: degenerate abscissa");
    LogSinFit out;
    out.c = (n * sxy - sx * sy) / det;
    out.b = (sy - out.c * sx) / n;
    return out;
}

ValueEB fit_power_tail(const std::vector<std::pair<double, double>>& chi_y, double chi_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (auto [chi, y] : chi_y) {
        if (chi > chi_max) continue;
        if (chi <= 0 || y <= 0) throw std::invalid_argument("fit_power_tail: nonpositive value in window");
        const double x = std::log2(chi), yl = std::log2(y);
        sx += x;
        sy += yl;
        sxx += x * x;
        sxy += x * yl;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_power_tail: too few points in window");
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw std::invalid_argument("fit_power_tail: degenerate abscissa");
    ValueEB out;
    out.value = (nn * sxy - sx * sy) / det;
    const double b = (sy - out.value * sx) / nn;
    if (n > 2) {
        double ss = 0;
        for (auto [chi, y] : chi_y) {
            if (chi > chi_max) continue;
            const double r = std::log2(y) - (out.value * std::log2(chi) + b);
            ss += r * r;
        }
        out.error = std::sqrt(ss / static_cast<double>(n - 2) * nn / det);
    }
    return out;
}

} // namespace plaqsym::fit
