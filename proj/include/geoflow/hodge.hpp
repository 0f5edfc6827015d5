#pragma once

#include <array>
#include <utility>

#include "geoflow/calculus.hpp"
#include "geoflow/grid.hpp"

namespace geoflow {

/// Orthonormal basis of the discrete harmonic 1-forms on the torus, built
/// from the cohomology representatives dx, dy plus exact corrections so the
/// periods stay those of the fundamental cycles.
struct HarmonicBasis {
    OneFormField beta1, beta2;
    /// max |<beta_i, beta_j> - delta_ij| after orthonormalization.
    double gram_residual = 0.0;
    /// periods[i][c]: period of beta_{i+1} over cycle c (0: x-cycle, 1: y-cycle).
    std::array<std::array<double, 2>, 2> periods{};
};

struct HodgeSplit {
    OneFormField exact, coexact, harmonic;
    ScalarField potential_f;  // mean-zero, exact = d potential_f
    TwoFormField potential_a; // coexact ~ delta potential_a
    double harmonic_c1 = 0.0, harmonic_c2 = 0.0;
};

/// Solve laplacian0 f = rhs for mean-zero f, relative residual <= 1e-10.
/// Constant metrics are solved directly in Fourier space; otherwise
/// conjugate gradients preconditioned by the flat inverse Laplacian.
/// Throws IncompatibleRHS when int rhs mu != 0 and NoConvergence at the
/// iteration cap 10 n^2.
ScalarField poisson_solve(const ScalarField& rhs, const MetricField& g);

HarmonicBasis harmonic_basis(const MetricField& g);

HodgeSplit hodge_decompose(const OneFormField& phi, const MetricField& g);
HodgeSplit hodge_decompose(const OneFormField& phi, const MetricField& g,
                           const HarmonicBasis& basis);

/// Orthogonal projection onto ker d = exact + harmonic 1-forms.
OneFormField project_closed(const OneFormField& phi, const MetricField& g,
                            const HarmonicBasis& basis);

/// W minus its gradient part; divergence of the result <= solver tolerance.
VectorField project_divfree(const VectorField& W, const MetricField& g);

/// Orthogonal projection onto symplectic fields, sharp_omega(ker d). On a
/// surface this agrees with project_divfree.
VectorField project_symplectic(const VectorField& W, const MetricField& g,
                               const HarmonicBasis& basis);

/// c_i = <flat X, beta_i>.
std::pair<double, double> harmonic_coefficients(const VectorField& X, const HarmonicBasis& basis,
                                                const MetricField& g);

/// Period of a 1-form over the x- and y-cycles (row/column averaged).
std::array<double, 2> cycle_periods(const OneFormField& phi);

} // namespace geoflow
