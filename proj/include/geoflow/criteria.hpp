#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geoflow/euler_arnold.hpp"
#include "geoflow/geometry.hpp"
#include "geoflow/grid.hpp"
#include "geoflow/hodge.hpp"

namespace geoflow {

enum class Verdict { pass, fail, indeterminate };

const char* verdict_name(Verdict v);
Verdict classify(double residual, double pass_tol, double fail_tol);

struct ConditionResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0; // pass threshold
    Verdict verdict = Verdict::indeterminate;
};

/// One row per totally-geodesic condition; the theorems assert equivalence,
/// so a mixed verdict flags either a bug or an under-resolved grid.
struct CriteriaReport {
    std::string metric_id;
    int grid_n = 0;
    DiffMode mode = DiffMode::spectral;
    double pass_tol = 1e-6;
    double fail_tol = 1e-4;
    std::vector<ConditionResult> conditions;
    bool theorem_consistency = false;
    bool all_pass = false;
    bool all_fail = false;
};

struct ParallelDefect {
    double full = 0.0; // || nabla beta ||
    double sym = 0.0;  // || (nabla beta)^sym ||; for closed forms both vanish together
};

/// || nabla beta || and || (nabla beta)^sym ||. Throws NotHarmonic unless
/// d beta and delta beta are below 1e-8 relative.
ParallelDefect parallel_defect(const OneFormField& beta, const MetricField& g,
                               const ChristoffelField& gam);

/// max-norm over the grid of ric(sharp beta1, sharp beta2) (pointwise form
/// of the theorem's condition). Throws NotHarmonic on non-harmonic inputs.
double ricci_pairing(const OneFormField& beta1, const OneFormField& beta2, const MetricField& g,
                     const ChristoffelField& gam);

/// int g(d delta alpha, delta alpha ^ beta) mu. beta must be harmonic.
double vol_condition_v(const TwoFormField& alpha, const OneFormField& beta, const MetricField& g);

/// int (lap f) (df ^ beta), a plain 2-form integral. beta must be closed.
double sym_condition_v(const ScalarField& f, const OneFormField& beta, const MetricField& g);

/// <[X,Y], X> in L2(g); vanishing for X in the subalgebra and Y in its
/// complement is the totally-geodesic criterion.
double tg_bracket_criterion(const VectorField& X, const VectorField& Y, const MetricField& g);

/// |2 <adT_full(X),Y> - int ((nabla flat Y)^sym + (div Y) g)(X,X) mu|
/// normalized by ||X||^2 ||Y||.
double lemma2_residual(const VectorField& X, const VectorField& Y, const MetricField& g,
                       const ChristoffelField& gam);

/// Successive quantities in the proof chain for the vol-condition:
/// <adT(sharp delta alpha), sharp beta> = <X,[X,sharp beta]> = -integral.
struct VolChain {
    double adjoint = 0.0;
    double bracket = 0.0;
    double neg_integral = 0.0;
};
VolChain vol_condition_chain(const TwoFormField& alpha, const OneFormField& beta,
                             const MetricField& g, const ChristoffelField& gam);

/// Chain for the sym-condition, including the Lie-derivative form
/// -int (lap f)(L_{sharp_omega beta} f) mu.
struct SymChain {
    double adjoint = 0.0;
    double bracket = 0.0;
    double neg_lie_integral = 0.0;
    double neg_integral = 0.0;
};
SymChain sym_condition_chain(const ScalarField& f, const OneFormField& beta, const MetricField& g,
                             const ChristoffelField& gam, const HarmonicBasis& basis);

/// Residuals of the proof identities
///   delta(p1^p2) - (delta p1) p2 + p1 (delta p2) = -flat [sharp p1, sharp p2]
///   [sharp_omega p1, sharp_omega p2] = -sharp_omega L_{sharp_omega p2} p1
/// (the second for closed inputs), both relative to the field scale.
double bracket_identity_flat(const OneFormField& p1, const OneFormField& p2, const MetricField& g);
double bracket_identity_omega(const OneFormField& p1, const OneFormField& p2,
                              const MetricField& g);

struct SteadyCheck {
    double adt_norm = 0.0;     // || adT_sym(sharp_omega df) ||
    double eigen_defect = 0.0; // || lap f - h(f) || for the fitted h
};
SteadyCheck steady_solution_check(const ScalarField& f, const MetricField& g);

// ---------------------------------------------------------------------------
// Bump detection
// ---------------------------------------------------------------------------

/// Fixed profile b(t) = exp(1 - 1/(1-4t^2)) for |t| < 1/2, else 0;
/// b(0) = 1, support [-1/2, 1/2].
double bump_b(double t);
double bump_db(double t);

struct BumpSpec {
    double epsilon = 1.0;
    int center_i = 0, center_j = 0; // grid node of the bump center
};

/// eps * int T(Z_eps, Z_eps) mu with Z_eps = sharp_omega d lambda_eps,
/// lambda_eps(x,y) = b((x-x0)/eps) b(y-y0), derivatives taken in closed form.
/// Requires eps in (0,1], eps >= 8h (EpsTooSmall) and a flat metric on the
/// bump support.
double detection_integral(const SymTensorField& T, const BumpSpec& spec, const MetricField& g);

/// Small-eps limit target int b'(u)^2 du * int b(v)^2 t22(v) dv by 1D
/// quadrature; t22 is T_22 along the vertical line through the center,
/// argument in [-1/2, 1/2].
double detection_limit_target(const std::function<double(double)>& t22_line);

// ---------------------------------------------------------------------------
// Condition suite
// ---------------------------------------------------------------------------

/// Fixed deterministic battery of test fields (documented low-degree trig
/// polynomials; the phase-mixed entries are what detect conformal metrics,
/// pure products are blind to x-even conformal factors by parity).
const std::vector<std::string>& vol_battery_alphas();
const std::vector<std::string>& sym_battery_fs();
const std::string& drift_probe_f0();

CriteriaReport run_criteria_suite(const MetricField& g, const std::string& metric_id,
                                  double pass_tol = 1e-6, double fail_tol = 1e-4);

// ---------------------------------------------------------------------------
// Deterministic pseudo-random trig fields (identity batteries, tests)
// ---------------------------------------------------------------------------

/// Band-limited field with splitmix64-seeded coefficients, modes |k| <= 3.
ScalarField trig_scalar(const GridSpec& grid, std::uint64_t seed);
VectorField trig_vector(const GridSpec& grid, std::uint64_t seed);
OneFormField trig_oneform(const GridSpec& grid, std::uint64_t seed);
OneFormField closed_trig_oneform(const GridSpec& grid, std::uint64_t seed);

} // namespace geoflow
