#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace plaqsym::fit {

struct ValueEB {
    double value = 0;
    double error = 0;
};

struct CurvePoint {
    double p = 0, y = 0, se = 0;
};
struct SizedCurve {
    double size = 0; // L
    std::vector<CurvePoint> pts;
};

struct CrossingResult {
    ValueEB p_c;
    std::size_t n_pairs = 0;
};

// Pairwise intersections of locally linear interpolants, combined by a
// slope-weighted mean; parametric bootstrap over the quoted errors.
CrossingResult estimate_crossing(const std::vector<SizedCurve>& curves, std::uint64_t boot_seed = 1,
                                 std::size_t n_boot = 200);

struct CollapseOptions {
    double span_pc = 0.05; // search stays inside [p0 - span, p0 + span]
    double span_nu = 0.6;
    std::size_t max_rounds = 60;
    double tol = 1e-4;
    std::size_t n_boot = 0; // 0: no bootstrap errors
    std::uint64_t boot_seed = 1;
    double window_x = 0;      // keep only |x| <= window_x when > 0
    bool se_weighted = false; // chi^2-normalized variant of the spread
};

struct CollapseFit {
    ValueEB p_c, nu;
    double quality = 0;
    bool converged = false;
    std::vector<std::array<double, 4>> scaled; // (x, y, se, size)
};

// Minimize the master-curve spread of y vs (p - p_c) L^{1/nu} over (p_c, nu)
// by bounded coordinate descent with golden-section line searches.
CollapseFit fit_collapse(const std::vector<SizedCurve>& curves, double p0, double nu0,
                         const CollapseOptions& opts = {});

// The spread objective on its own (exposed for tests and custom sweeps).
double collapse_quality(const std::vector<SizedCurve>& curves, double p_c, double nu);

struct DynPoint {
    double ltau = 0, y = 0, se = 0;
};
struct DynCurve {
    double size = 0;
    std::vector<DynPoint> pts;
};

struct DynamicOptions {
    bool fit_z = true;
    double z0 = 1.0;
    double span_z = 0.8;
    double early_max = 0.3; // theta window for the h0 fit
    double late_min = 1.5;  // theta window for the h1 fit
    std::size_t max_rounds = 40;
    double tol = 1e-4;
};

struct DynamicCollapse {
    ValueEB z, h0, h1;
    double quality = 0;
    double early_max = 0, late_min = 0;
};

// Collapse symI(L, L_tau) onto h(theta) with theta = L_tau / L^z; early
// window fits y = pi h0 theta^{-1/z}, late window fits y ~ exp(-h1 2pi theta).
DynamicCollapse fit_dynamic_collapse(const std::vector<DynCurve>& curves,
                                     const DynamicOptions& opts = {});

// chi = x12 x34 / (x13 x24) with chord distance (L/pi) sin(pi |xi-xj| / L).
double cross_ratio(double x1, double x2, double x3, double x4, double L);

struct LogSinFit {
    double c = 0, b = 0;
};

// Least squares y = c log2 sin(pi la / L) + b; with chord_prefactor the
// abscissa is log2((L/pi) sin(pi la / L)) instead.
LogSinFit fit_log_sin(const std::vector<std::pair<double, double>>& la_y, double L,
                      bool chord_prefactor = false);

// Log-log slope over the chi <= chi_max window; error is the regression
// slope's standard error.
ValueEB fit_power_tail(const std::vector<std::pair<double, double>>& chi_y, double chi_max = 1.0);

} // namespace plaqsym::fit
