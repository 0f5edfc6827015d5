#include "geoflow/euler_arnold.hpp"

#include <cmath>

#include "geoflow/derivatives.hpp"

namespace geoflow {

namespace {

double relative_div_residual(const VectorField& X, const MetricField& g) {
    const double xnorm = l2_norm(X, g);
    if (xnorm == 0.0) return 0.0;
    return l2_norm(divergence(X, g), g) / xnorm;
}

/// nabla_X X + 1/2 grad g(X,X), the advective part shared by all groups.
VectorField advective_part(const VectorField& X, const MetricField& g,
                           const ChristoffelField& gam) {
    return cov_deriv_vec(X, X, gam) + 0.5 * gradient(vector_pairing(X, X, g), g);
}

} // namespace

VectorField adT_full(const VectorField& X, const MetricField& g, const ChristoffelField& gam) {
    const VectorField adv = cov_deriv_vec(X, X, gam);
    const ScalarField div_x = divergence(X, g);
    const VectorField grad_half = gradient(vector_pairing(X, X, g), g);
    VectorField out(X.grid);
    const int n = X.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.comp_x(i, j) = -adv.comp_x(i, j) - div_x.values(i, j) * X.comp_x(i, j) -
                               0.5 * grad_half.comp_x(i, j);
            out.comp_y(i, j) = -adv.comp_y(i, j) - div_x.values(i, j) * X.comp_y(i, j) -
                               0.5 * grad_half.comp_y(i, j);
        }
    return out;
}

VectorField adT_vol(const VectorField& X, const MetricField& g, const ChristoffelField& gam) {
    const double resid = relative_div_residual(X, g);
    if (resid > 1e-8) throw NotDivergenceFree(resid);
    const VectorField adv = cov_deriv_vec(X, X, gam);
    const ScalarField p = poisson_solve(divergence(adv, g), g);
    return -1.0 * adv - gradient(p, g);
}

VectorField adT_sym(const VectorField& X, const MetricField& g, const ChristoffelField& gam,
                    const HarmonicBasis& basis) {
    const double xnorm = l2_norm(X, g);
    if (xnorm > 0.0) {
        const double resid = l2_norm(d1(flat_omega(X, g)), g) / xnorm;
        if (resid > 1e-8) throw NotSymplectic(resid);
    }
    const VectorField w = advective_part(X, g, gam);
    return -1.0 * sharp_omega(project_closed(flat_omega(w, g), g, basis), g);
}

VectorField geodesic_rhs(const VectorField& X, const MetricField& g, const ChristoffelField& gam,
                         Group group, const HarmonicBasis& basis) {
    VectorField rhs = group == Group::full  ? adT_full(X, g, gam)
                      : group == Group::vol ? adT_vol(X, g, gam)
                                            : adT_sym(X, g, gam, basis);
    if (X.grid.mode == DiffMode::spectral) {
        dealias_inplace(rhs.comp_x, X.grid);
        dealias_inplace(rhs.comp_y, X.grid);
    }
    return rhs;
}

EvolveContext::EvolveContext(const MetricField& metric)
    : g(metric), gam(christoffels(metric)), basis(harmonic_basis(metric)) {}

GeodesicState make_state(double t, VectorField X, const EvolveContext& ctx) {
    GeodesicState s;
    s.t = t;
    s.energy = 0.5 * inner_product(X, X, ctx.g);
    s.div_norm = l2_norm(divergence(X, ctx.g), ctx.g);
    auto [c1, c2] = harmonic_coefficients(X, ctx.basis, ctx.g);
    s.c1 = c1;
    s.c2 = c2;
    s.X = std::move(X);
    return s;
}

GeodesicState step(const GeodesicState& state, const IntegratorConfig& cfg,
                   const EvolveContext& ctx) {
    const double dt = cfg.dt;
    const VectorField& x = state.X;
    auto rhs = [&](const VectorField& v) {
        return geodesic_rhs(v, ctx.g, ctx.gam, cfg.group, ctx.basis);
    };
    const VectorField k1 = rhs(x);
    const VectorField k2 = rhs(x + (0.5 * dt) * k1);
    const VectorField k3 = rhs(x + (0.5 * dt) * k2);
    const VectorField k4 = rhs(x + dt * k3);
    VectorField next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return make_state(state.t + dt, std::move(next), ctx);
}

Trajectory evolve(const VectorField& X0, const IntegratorConfig& cfg, const MetricField& g) {
    EvolveContext ctx(g);
    return evolve(X0, cfg, ctx);
}

Trajectory evolve(const VectorField& X0, const IntegratorConfig& cfg, const EvolveContext& ctx) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
    const GridSpec& grid = X0.grid;
    const double h = grid.spacing();

    const double vmax0 = std::max(max_abs(X0.comp_x), max_abs(X0.comp_y));
    if (cfg.dt * vmax0 > 0.5 * h) throw CFLViolation(0, cfg.dt * vmax0 / h);

    const std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));

    Trajectory traj;
    traj.steps = nsteps;
    GeodesicState state = make_state(0.0, X0, ctx);
    traj.records.push_back(state);

    for (std::size_t k = 1; k <= nsteps; ++k) {
        state = step(state, cfg, ctx);

        if (!all_finite(state.X.comp_x) || !all_finite(state.X.comp_y)) throw NanDetected(k);
        const double vmax = std::max(max_abs(state.X.comp_x), max_abs(state.X.comp_y));
        if (cfg.dt * vmax > h) throw CFLViolation(k, cfg.dt * vmax / h);

        if (cfg.reproject_every > 0 && k % static_cast<std::size_t>(cfg.reproject_every) == 0 &&
            cfg.group != Group::full) {
            traj.max_drift_before_reproject =
                std::max(traj.max_drift_before_reproject, state.div_norm);
            VectorField projected = cfg.group == Group::vol
                                        ? project_divfree(state.X, ctx.g)
                                        : project_symplectic(state.X, ctx.g, ctx.basis);
            state = make_state(state.t, std::move(projected), ctx);
        }

        if (k == nsteps || (cfg.record_every > 0 &&
                            k % static_cast<std::size_t>(cfg.record_every) == 0))
            traj.records.push_back(state);
    }
    return traj;
}

} // namespace geoflow
