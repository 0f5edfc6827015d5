#include "geoflow/criteria.hpp"

#include <algorithm>
#include <cmath>

namespace geoflow {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

Verdict classify(double residual, double pass_tol, double fail_tol) {
    if (residual <= pass_tol) return Verdict::pass;
    if (residual >= fail_tol) return Verdict::fail;
    return Verdict::indeterminate;
}

namespace {

double harmonic_residual(const OneFormField& beta, const MetricField& g) {
    const double bnorm = l2_norm(beta, g);
    if (bnorm == 0.0) return 0.0;
    return std::max(l2_norm(d1(beta), g), l2_norm(delta1(beta, g), g)) / bnorm;
}

void require_harmonic(const OneFormField& beta, const MetricField& g) {
    const double r = harmonic_residual(beta, g);
    if (r > 1e-8) throw NotHarmonic(r);
}

void require_closed(const OneFormField& beta, const MetricField& g) {
    const double bnorm = l2_norm(beta, g);
    const double r = bnorm == 0.0 ? 0.0 : l2_norm(d1(beta), g) / bnorm;
    if (r > 1e-8) throw NotClosed(r);
}

} // namespace

ParallelDefect parallel_defect(const OneFormField& beta, const MetricField& g,
                               const ChristoffelField& gam) {
    require_harmonic(beta, g);
    ParallelDefect out;
    out.full = two_tensor_l2_norm(nabla_oneform(beta, gam), g);
    out.sym = sym_tensor_l2_norm(nabla_sym(beta, gam), g);
    return out;
}

double ricci_pairing(const OneFormField& beta1, const OneFormField& beta2, const MetricField& g,
                     const ChristoffelField& gam) {
    require_harmonic(beta1, g);
    require_harmonic(beta2, g);
    const SymTensorField ric = ricci(g, gam);
    const ScalarField pairing =
        sym_tensor_apply(ric, sharp_g(beta1, g), sharp_g(beta2, g));
    return max_abs(pairing);
}

double vol_condition_v(const TwoFormField& alpha, const OneFormField& beta, const MetricField& g) {
    require_harmonic(beta, g);
    const OneFormField da = delta2(alpha, g);
    return inner_product(d1(da), wedge11(da, beta), g);
}

double sym_condition_v(const ScalarField& f, const OneFormField& beta, const MetricField& g) {
    require_closed(beta, g);
    const ScalarField lap = laplacian0(f, g);
    return integrate_two_form(pointwise_scale(lap, wedge11(d0(f), beta)));
}

double tg_bracket_criterion(const VectorField& X, const VectorField& Y, const MetricField& g) {
    return inner_product(lie_bracket(X, Y), X, g);
}

double lemma2_residual(const VectorField& X, const VectorField& Y, const MetricField& g,
                       const ChristoffelField& gam) {
    const double lhs = 2.0 * inner_product(adT_full(X, g, gam), Y, g);

    const ScalarField div_y = divergence(Y, g);
    SymTensorField S = nabla_sym(flat_g(Y, g), gam);
    S.t11 = S.t11 + hadamard(div_y.values, g.g11());
    S.t12 = S.t12 + hadamard(div_y.values, g.g12());
    S.t22 = S.t22 + hadamard(div_y.values, g.g22());
    const double rhs = integrate(sym_tensor_apply(S, X, X), g);

    const double xn = l2_norm(X, g);
    const double yn = l2_norm(Y, g);
    return std::abs(lhs - rhs) / std::max(1e-300, xn * xn * yn);
}

VolChain vol_condition_chain(const TwoFormField& alpha, const OneFormField& beta,
                             const MetricField& g, const ChristoffelField& gam) {
    const VectorField X = sharp_g(delta2(alpha, g), g);
    const VectorField Y = sharp_g(beta, g);
    VolChain out;
    out.adjoint = inner_product(adT_full(X, g, gam), Y, g);
    out.bracket = inner_product(lie_bracket(X, Y), X, g);
    out.neg_integral = -vol_condition_v(alpha, beta, g);
    return out;
}

SymChain sym_condition_chain(const ScalarField& f, const OneFormField& beta, const MetricField& g,
                             const ChristoffelField& gam, const HarmonicBasis& basis) {
    const VectorField X = sharp_omega(d0(f), g);
    const VectorField Y = sharp_omega(beta, g);
    SymChain out;
    out.adjoint = inner_product(adT_sym(X, g, gam, basis), Y, g);
    out.bracket = inner_product(lie_bracket(X, Y), X, g);
    out.neg_lie_integral = -inner_product(laplacian0(f, g), oneform_apply(d0(f), Y), g);
    out.neg_integral = -sym_condition_v(f, beta, g);
    return out;
}

double bracket_identity_flat(const OneFormField& p1, const OneFormField& p2,
                             const MetricField& g) {
    const OneFormField lhs = delta2(wedge11(p1, p2), g) -
                             pointwise_scale(delta1(p1, g), p2) +
                             pointwise_scale(delta1(p2, g), p1);
    const OneFormField rhs =
        -1.0 * flat_g(lie_bracket(sharp_g(p1, g), sharp_g(p2, g)), g);
    const double denom = std::max(1e-300, l2_norm(p1, g) * l2_norm(p2, g));
    return l2_norm(lhs - rhs, g) / denom;
}

double bracket_identity_omega(const OneFormField& p1, const OneFormField& p2,
                              const MetricField& g) {
    require_closed(p1, g);
    require_closed(p2, g);
    const VectorField lhs = lie_bracket(sharp_omega(p1, g), sharp_omega(p2, g));
    const VectorField rhs =
        -1.0 * sharp_omega(lie_deriv_oneform(sharp_omega(p2, g), p1), g);
    const double denom = std::max(1e-300, l2_norm(p1, g) * l2_norm(p2, g));
    return l2_norm(lhs - rhs, g) / denom;
}

// ---------------------------------------------------------------------------
// Steady solutions
// ---------------------------------------------------------------------------

namespace {

/// Least-squares fit of lap in terms of f with Chebyshev polynomials of
/// degree <= 10 on the normalized value range; returns the L2 defect.
double eigenvector_defect(const ScalarField& f, const ScalarField& lap, const MetricField& g) {
    const auto& fv = f.values.values();
    const auto& lv = lap.values.values();
    double fmin = fv[0], fmax = fv[0];
    for (double v : fv) {
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
    }
    const double range = fmax - fmin;
    if (range < 1e-12) {
        double mean = 0.0;
        for (double v : lv) mean += v;
        mean /= static_cast<double>(lv.size());
        ScalarField resid(f.grid);
        for (std::size_t k = 0; k < lv.size(); ++k) resid.values.values()[k] = lv[k] - mean;
        return l2_norm(resid, g);
    }

    constexpr int deg = 10;
    constexpr int m = deg + 1;
    std::vector<double> M(m * m, 0.0), rhs(m, 0.0), T(m);
    for (std::size_t k = 0; k < fv.size(); ++k) {
        const double t = 2.0 * (fv[k] - fmin) / range - 1.0;
        T[0] = 1.0;
        T[1] = t;
        for (int a = 2; a < m; ++a) T[a] = 2.0 * t * T[a - 1] - T[a - 2];
        for (int a = 0; a < m; ++a) {
            rhs[a] += T[a] * lv[k];
            for (int b = a; b < m; ++b) M[a * m + b] += T[a] * T[b];
        }
    }
    double trace = 0.0;
    for (int a = 0; a < m; ++a) trace += M[a * m + a];
    const double ridge = 1e-12 * trace / m;
    for (int a = 0; a < m; ++a) {
        M[a * m + a] += ridge;
        for (int b = 0; b < a; ++b) M[a * m + b] = M[b * m + a];
    }

    // Cholesky solve M c = rhs.
    std::vector<double> L(m * m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b <= a; ++b) {
            double s = M[a * m + b];
            for (int c = 0; c < b; ++c) s -= L[a * m + c] * L[b * m + c];
            if (a == b)
                L[a * m + a] = std::sqrt(std::max(s, 1e-30));
            else
                L[a * m + b] = s / L[b * m + b];
        }
    std::vector<double> yv(m), c(m);
    for (int a = 0; a < m; ++a) {
        double s = rhs[a];
        for (int b = 0; b < a; ++b) s -= L[a * m + b] * yv[b];
        yv[a] = s / L[a * m + a];
    }
    for (int a = m - 1; a >= 0; --a) {
        double s = yv[a];
        for (int b = a + 1; b < m; ++b) s -= L[b * m + a] * c[b];
        c[a] = s / L[a * m + a];
    }

    ScalarField resid(f.grid);
    for (std::size_t k = 0; k < fv.size(); ++k) {
        const double t = 2.0 * (fv[k] - fmin) / range - 1.0;
        T[0] = 1.0;
        T[1] = t;
        for (int a = 2; a < m; ++a) T[a] = 2.0 * t * T[a - 1] - T[a - 2];
        double fit = 0.0;
        for (int a = 0; a < m; ++a) fit += c[a] * T[a];
        resid.values.values()[k] = lv[k] - fit;
    }
    return l2_norm(resid, g);
}

} // namespace

SteadyCheck steady_solution_check(const ScalarField& f, const MetricField& g) {
    const ChristoffelField gam = christoffels(g);
    const HarmonicBasis basis = harmonic_basis(g);
    const VectorField X = sharp_omega(d0(f), g);
    SteadyCheck out;
    out.adt_norm = l2_norm(adT_sym(X, g, gam, basis), g);
    out.eigen_defect = eigenvector_defect(f, laplacian0(f, g), g);
    return out;
}

// ---------------------------------------------------------------------------
// Bump detection
// ---------------------------------------------------------------------------

double bump_b(double t) {
    if (std::abs(t) >= 0.5) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - 4.0 * t * t));
}

double bump_db(double t) {
    if (std::abs(t) >= 0.5) return 0.0;
    const double q = 1.0 - 4.0 * t * t;
    return bump_b(t) * (-8.0 * t) / (q * q);
}

namespace {

/// Periodic bilinear sample of a nodal buffer at a real point.
double bilinear(const Buffer2D& f, double x, double y, double h) {
    const double xi = x / h, yj = y / h;
    const int i0 = static_cast<int>(std::floor(xi));
    const int j0 = static_cast<int>(std::floor(yj));
    const double fx = xi - i0, fy = yj - j0;
    const double v00 = f.wrap(i0, j0), v10 = f.wrap(i0 + 1, j0);
    const double v01 = f.wrap(i0, j0 + 1), v11 = f.wrap(i0 + 1, j0 + 1);
    return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
}

} // namespace

double detection_integral(const SymTensorField& T, const BumpSpec& spec, const MetricField& g) {
    require_same_grid(T.grid, g.grid());
    const GridSpec& grid = T.grid;
    const double h = grid.spacing();
    const double eps = spec.epsilon;
    if (!(eps > 0.0) || eps > 1.0)
        throw ConfigError("bump width eps must lie in (0,1], got " + std::to_string(eps));
    if (eps < 8.0 * h) throw EpsTooSmall(eps, h);

    const double x0 = grid.x(spec.center_i);
    const double y0 = grid.y(spec.center_j);
    const int n = grid.n;

    for (int i = 0; i < n; ++i) {
        if (std::abs(std::remainder(grid.x(i) - x0, two_pi)) > 0.5 * eps + h) continue;
        for (int j = 0; j < n; ++j) {
            if (std::abs(std::remainder(grid.y(j) - y0, two_pi)) > 0.5 + h) continue;
            if (std::abs(g.g11()(i, j) - 1.0) > 1e-12 || std::abs(g.g12()(i, j)) > 1e-12 ||
                std::abs(g.g22()(i, j) - 1.0) > 1e-12)
                throw ConfigError("metric is not flat on the bump support");
        }
    }

    // The bump factors carry all the sharp variation and are known in closed
    // form, so integrate per grid cell with composite Simpson subsampling;
    // the tensor itself is sampled bilinearly (exact for the constant-T
    // acceptance case).
    constexpr int sub = 8;
    double simpson_w[sub + 1];
    for (int k = 0; k <= sub; ++k)
        simpson_w[k] = (k == 0 || k == sub) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const double dsub = h / sub;

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cx = grid.x(i);
        if (std::abs(std::remainder(cx + 0.5 * h - x0, two_pi)) > 0.5 * eps + h) continue;
        for (int j = 0; j < n; ++j) {
            const double cy = grid.y(j);
            if (std::abs(std::remainder(cy + 0.5 * h - y0, two_pi)) > 0.5 + h) continue;
            double cell = 0.0;
            for (int a = 0; a <= sub; ++a) {
                const double x = cx + a * dsub;
                const double u = std::remainder(x - x0, two_pi) / eps;
                if (std::abs(u) >= 0.5) continue;
                const double bu = bump_b(u), dbu = bump_db(u);
                for (int b = 0; b <= sub; ++b) {
                    const double y = cy + b * dsub;
                    const double v = std::remainder(y - y0, two_pi);
                    if (std::abs(v) >= 0.5) continue;
                    const double z1 = bu * bump_db(v);
                    const double z2 = -dbu * bump_b(v) / eps;
                    const double t11 = bilinear(T.t11, x, y, h);
                    const double t12 = bilinear(T.t12, x, y, h);
                    const double t22 = bilinear(T.t22, x, y, h);
                    cell += simpson_w[a] * simpson_w[b] *
                            (t11 * z1 * z1 + 2.0 * t12 * z1 * z2 + t22 * z2 * z2);
                }
            }
            sum += cell * (dsub / 3.0) * (dsub / 3.0);
        }
    }
    return eps * sum;
}

double detection_limit_target(const std::function<double(double)>& t22_line) {
    // Composite Simpson on [-1/2, 1/2], fixed node count.
    constexpr int m = 4096;
    const double step = 1.0 / m;
    auto simpson = [&](const std::function<double(double)>& fn) {
        double s = fn(-0.5) + fn(0.5);
        for (int k = 1; k < m; ++k) s += fn(-0.5 + k * step) * (k % 2 == 1 ? 4.0 : 2.0);
        return s * step / 3.0;
    };
    const double i1 = simpson([](double u) { return bump_db(u) * bump_db(u); });
    const double i2 = simpson([&](double v) { return bump_b(v) * bump_b(v) * t22_line(v); });
    return i1 * i2;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

const std::vector<std::string>& vol_battery_alphas() {
    static const std::vector<std::string> alphas = {
        "cos(x)*cos(y)",
        "(cos(x)+sin(x))*cos(y)",
        "(cos(x)+sin(x))*(cos(y)+sin(y))",
        "sin(x+y)+0.5*cos(x)",
        "sin(x)*sin(2*y)+0.25*(cos(x)+sin(x))*cos(y)",
    };
    return alphas;
}

const std::vector<std::string>& sym_battery_fs() {
    static const std::vector<std::string> fs = {
        "cos(x)*cos(y)",
        "(cos(x)+sin(x))*cos(y)",
        "(cos(x)+sin(x))*(cos(y)+sin(y))",
        "sin(x+y)",
        "sin(x)*sin(2*y)+0.3*(cos(x)+sin(x))*sin(y)",
    };
    return fs;
}

const std::string& drift_probe_f0() {
    static const std::string f0 = "(cos(x)+sin(x))*(cos(y)+sin(y))";
    return f0;
}

CriteriaReport run_criteria_suite(const MetricField& g, const std::string& metric_id,
                                  double pass_tol, double fail_tol) {
    const GridSpec& grid = g.grid();
    EvolveContext ctx(g);
    const OneFormField* betas[2] = {&ctx.basis.beta1, &ctx.basis.beta2};

    CriteriaReport report;
    report.metric_id = metric_id;
    report.grid_n = grid.n;
    report.mode = grid.mode;
    report.pass_tol = pass_tol;
    report.fail_tol = fail_tol;

    auto add = [&](const std::string& name, double residual) {
        report.conditions.push_back(
            {name, residual, pass_tol, classify(residual, pass_tol, fail_tol)});
    };

    // (ii) every harmonic 1-form parallel
    double r_parallel = 0.0;
    for (const auto* b : betas) r_parallel = std::max(r_parallel, parallel_defect(*b, g, ctx.gam).full);
    add("harmonic_parallel", r_parallel);

    // (iii) ric(beta_i, beta_j) = 0 pointwise
    double r_ric = 0.0;
    r_ric = std::max(r_ric, ricci_pairing(*betas[0], *betas[0], g, ctx.gam));
    r_ric = std::max(r_ric, ricci_pairing(*betas[0], *betas[1], g, ctx.gam));
    r_ric = std::max(r_ric, ricci_pairing(*betas[1], *betas[1], g, ctx.gam));
    add("ricci_pairing", r_ric);

    // Killing complement: sharp_g beta and sharp_omega beta
    double r_kill = 0.0;
    for (const auto* b : betas) {
        r_kill = std::max(r_kill, killing_defect(sharp_g(*b, g), g, ctx.gam));
        r_kill = std::max(r_kill, killing_defect(sharp_omega(*b, g), g, ctx.gam));
    }
    add("killing_complement", r_kill);

    // (v) vol form, over the alpha battery
    double r_vol = 0.0;
    for (const auto& expr : vol_battery_alphas()) {
        TwoFormField alpha(grid);
        alpha.density = eval_expression(expr, grid).values;
        for (const auto* b : betas)
            r_vol = std::max(r_vol, std::abs(vol_condition_v(alpha, *b, g)));
    }
    add("vol_condition_v", r_vol);

    // (v) sym form, over the f battery
    double r_sym = 0.0;
    for (const auto& expr : sym_battery_fs()) {
        const ScalarField f = eval_expression(expr, grid);
        for (const auto* b : betas)
            r_sym = std::max(r_sym, std::abs(sym_condition_v(f, *b, g)));
    }
    add("sym_condition_v", r_sym);

    // Geodesic drift probe: Hamiltonian data, harmonic coefficients start at
    // zero exactly; residual is the measured drift rate over 10 steps.
    {
        const ScalarField f0 = eval_expression(drift_probe_f0(), grid);
        IntegratorConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 10 * cfg.dt;
        cfg.group = Group::sym;
        cfg.reproject_every = 0;
        cfg.record_every = 10;
        const Trajectory traj = evolve(sharp_omega(d0(f0), g), cfg, ctx);
        const GeodesicState& s0 = traj.records.front();
        const GeodesicState& s1 = traj.records.back();
        const double rate =
            std::max(std::abs(s1.c1 - s0.c1), std::abs(s1.c2 - s0.c2)) / (s1.t - s0.t);
        add("geodesic_drift", rate);
    }

    report.all_pass = std::all_of(report.conditions.begin(), report.conditions.end(),
                                  [](const ConditionResult& c) { return c.verdict == Verdict::pass; });
    report.all_fail = std::all_of(report.conditions.begin(), report.conditions.end(),
                                  [](const ConditionResult& c) { return c.verdict == Verdict::fail; });
    report.theorem_consistency = report.all_pass || report.all_fail;
    return report;
}

// ---------------------------------------------------------------------------
// Deterministic trig fields
// ---------------------------------------------------------------------------

namespace {

struct SplitMix {
    std::uint64_t s;
    double next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0; // uniform in [-1, 1)
    }
};

} // namespace

ScalarField trig_scalar(const GridSpec& grid, std::uint64_t seed) {
    SplitMix rng{seed};
    struct Mode {
        int kx, ky;
        double a, b;
    };
    std::vector<Mode> modes;
    for (int kx = 0; kx <= 3; ++kx)
        for (int ky = kx == 0 ? 1 : -3; ky <= 3; ++ky) {
            const double damp = 1.0 / (1.0 + kx * kx + ky * ky);
            modes.push_back({kx, ky, damp * rng.next(), damp * rng.next()});
        }
    ScalarField out(grid);
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            const double x = grid.x(i), y = grid.y(j);
            double v = 0.0;
            for (const Mode& m : modes)
                v += m.a * std::cos(m.kx * x + m.ky * y) + m.b * std::sin(m.kx * x + m.ky * y);
            out.values(i, j) = v;
        }
    return out;
}

VectorField trig_vector(const GridSpec& grid, std::uint64_t seed) {
    VectorField out(grid);
    out.comp_x = trig_scalar(grid, seed * 2654435761ull + 1).values;
    out.comp_y = trig_scalar(grid, seed * 2654435761ull + 2).values;
    return out;
}

OneFormField trig_oneform(const GridSpec& grid, std::uint64_t seed) {
    OneFormField out(grid);
    out.comp_x = trig_scalar(grid, seed * 2654435761ull + 3).values;
    out.comp_y = trig_scalar(grid, seed * 2654435761ull + 4).values;
    return out;
}

OneFormField closed_trig_oneform(const GridSpec& grid, std::uint64_t seed) {
    SplitMix rng{seed * 2654435761ull + 5};
    const double c1 = rng.next();
    const double c2 = rng.next();
    OneFormField out = d0(trig_scalar(grid, seed * 2654435761ull + 6));
    for (auto& v : out.comp_x.values()) v += c1;
    for (auto& v : out.comp_y.values()) v += c2;
    return out;
}

} // namespace geoflow
