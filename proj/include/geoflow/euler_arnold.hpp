#pragma once

#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/grid.hpp"
#include "geoflow/hodge.hpp"

namespace geoflow {

enum class Group { full, vol, sym };

/// ad(X)^T X on all of Diff: -nabla_X X - (div X) X - 1/2 grad g(X,X).
VectorField adT_full(const VectorField& X, const MetricField& g, const ChristoffelField& gam);

/// ad(X)^T X on the volume-preserving group: -nabla_X X - grad p with
/// lap p = div(nabla_X X). Requires div-free X (NotDivergenceFree otherwise).
/// Agrees with project_divfree(adT_full(X)) up to solver tolerance.
VectorField adT_vol(const VectorField& X, const MetricField& g, const ChristoffelField& gam);

/// ad(X)^T X on the symplectic group, realized as
/// -sharp_omega ( P_closed ( flat_omega ( nabla_X X + 1/2 grad g(X,X) ) ) ).
/// Requires symplectic X, i.e. d(flat_omega X) = 0 (NotSymplectic otherwise).
VectorField adT_sym(const VectorField& X, const MetricField& g, const ChristoffelField& gam,
                    const HarmonicBasis& basis);

/// Right-hand side of d/dt X = ad(X)^T X for the chosen group; dealiased in
/// spectral mode (2/3 rule on the quadratic terms).
VectorField geodesic_rhs(const VectorField& X, const MetricField& g, const ChristoffelField& gam,
                         Group group, const HarmonicBasis& basis);

struct GeodesicState {
    double t = 0.0;
    VectorField X;
    double energy = 0.0;   // 1/2 <flat X, flat X>
    double div_norm = 0.0; // L2 norm of div X
    double c1 = 0.0, c2 = 0.0;
};

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Group group = Group::sym;
    int reproject_every = 10; // 0 disables constraint re-projection
    int record_every = 10;
};

struct Trajectory {
    std::vector<GeodesicState> records;
    double max_drift_before_reproject = 0.0;
    std::size_t steps = 0;
};

/// Precomputed per-metric data shared across steps.
struct EvolveContext {
    const MetricField& g;
    ChristoffelField gam;
    HarmonicBasis basis;

    explicit EvolveContext(const MetricField& metric);
};

GeodesicState make_state(double t, VectorField X, const EvolveContext& ctx);

/// One classical RK4 step.
GeodesicState step(const GeodesicState& state, const IntegratorConfig& cfg,
                   const EvolveContext& ctx);

/// Integrate from X0 to t_end; records diagnostics every record_every steps
/// (plus first and last), re-projects every reproject_every steps. Throws
/// CFLViolation / NanDetected with the offending step index.
Trajectory evolve(const VectorField& X0, const IntegratorConfig& cfg, const MetricField& g);
Trajectory evolve(const VectorField& X0, const IntegratorConfig& cfg, const EvolveContext& ctx);

} // namespace geoflow
