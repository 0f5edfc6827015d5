#include "geoflow/hodge.hpp"

#include <cmath>

#include "geoflow/derivatives.hpp"

namespace geoflow {

namespace {

double dot(const Buffer2D& a, const Buffer2D& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a.values()[k] * b.values()[k];
    return s;
}

double norm(const Buffer2D& a) { return std::sqrt(std::max(0.0, dot(a, a))); }

/// Coefficients w^{ij} = sqrt_det g^{ij} of the divergence-form operator.
struct PoissonOperator {
    const GridSpec grid;
    Buffer2D w11, w12, w22;

    explicit PoissonOperator(const MetricField& g)
        : grid(g.grid()),
          w11(hadamard(g.sqrt_det(), g.inv11())),
          w12(hadamard(g.sqrt_det(), g.inv12())),
          w22(hadamard(g.sqrt_det(), g.inv22())) {}

    /// A f = -D_i (w^{ij} D_j f); symmetric positive semi-definite, kernel
    /// spanned by constants (plus unresolved Nyquist modes in spectral mode).
    Buffer2D apply(const Buffer2D& f) const {
        auto [fx, fy] = partials(f, grid);
        Buffer2D u(grid.n), v(grid.n);
        for (std::size_t k = 0; k < f.size(); ++k) {
            u.values()[k] = w11.values()[k] * fx.values()[k] + w12.values()[k] * fy.values()[k];
            v.values()[k] = w12.values()[k] * fx.values()[k] + w22.values()[k] * fy.values()[k];
        }
        Buffer2D div = partial_x(u, grid) + partial_y(v, grid);
        return -1.0 * div;
    }
};

void subtract_mean_plain(Buffer2D& b) {
    double m = 0.0;
    for (double v : b.values()) m += v;
    m /= static_cast<double>(b.size());
    for (double& v : b.values()) v -= m;
}

void subtract_mean_weighted(ScalarField& f, const MetricField& g) {
    const double vol = integrate(ScalarField(f.grid, 1.0), g);
    const double mean = integrate(f, g) / vol;
    for (double& v : f.values.values()) v -= mean;
}

} // namespace

ScalarField poisson_solve(const ScalarField& rhs, const MetricField& g) {
    require_same_grid(rhs.grid, g.grid());
    const GridSpec& grid = rhs.grid;
    const int n = grid.n;

    const double rhs_norm = l2_norm(rhs, g);
    const double mean = integrate(rhs, g);
    if (std::abs(mean) > 1e-10 * std::max(1.0, rhs_norm)) throw IncompatibleRHS(mean);

    // Symmetrized system: -D_i(sqrt_det g^{ij} D_j f) = sqrt_det * rhs.
    Buffer2D b = hadamard(g.sqrt_det(), rhs.values);
    subtract_mean_plain(b);

    ScalarField out(grid);
    const double bnorm = norm(b);
    if (bnorm == 0.0) return out;

    if (g.is_constant()) {
        const double sd = g.sqrt_det()(0, 0);
        out.values = const_coeff_inverse(b, grid, sd * g.inv11()(0, 0), sd * g.inv12()(0, 0),
                                         sd * g.inv22()(0, 0));
        subtract_mean_weighted(out, g);
        return out;
    }

    const PoissonOperator op(g);
    const double tol = 1e-13 * bnorm;
    const std::size_t max_iter = static_cast<std::size_t>(10) * n * n;

    Buffer2D x(n), r = b;
    Buffer2D z = flat_inverse_laplacian(r, grid);
    Buffer2D p = z;
    double rho = dot(r, z);
    double rnorm = norm(r);
    Buffer2D best_x = x;
    double best = rnorm;
    bool stalled_out = false;
    int stalled = 0;

    std::size_t iter = 0;
    while (rnorm > tol && iter < max_iter) {
        const Buffer2D q = op.apply(p);
        const double pq = dot(p, q);
        if (!(pq > 0.0) || !std::isfinite(pq)) {
            stalled_out = true;
            break;
        }
        const double alpha = rho / pq;
        for (std::size_t k = 0; k < x.size(); ++k) {
            x.values()[k] += alpha * p.values()[k];
            r.values()[k] -= alpha * q.values()[k];
        }
        z = flat_inverse_laplacian(r, grid);
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t k = 0; k < p.size(); ++k)
            p.values()[k] = z.values()[k] + beta * p.values()[k];
        rnorm = norm(r);
        const double prev_best = best;
        if (rnorm < best) {
            best = rnorm;
            best_x = x;
        }
        if (rnorm < 0.999 * prev_best)
            stalled = 0;
        else if (++stalled > 100) {
            // Round-off floor: the consistent part of b is solved and what
            // remains is out-of-range noise (e.g. when the rhs itself is
            // cancellation residue). The best iterate is the least-squares
            // answer.
            stalled_out = true;
            break;
        }
        ++iter;
    }

    if (!stalled_out && rnorm > 1e-10 * bnorm) throw NoConvergence(iter, rnorm / bnorm);

    out.values = best < rnorm ? std::move(best_x) : std::move(x);
    subtract_mean_weighted(out, g);
    return out;
}

std::array<double, 2> cycle_periods(const OneFormField& phi) {
    const int n = phi.grid.n;
    const double h = phi.grid.spacing();
    double px = 0.0, py = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            px += phi.comp_x(i, j);
            py += phi.comp_y(i, j);
        }
    return {px * h / n, py * h / n};
}

HarmonicBasis harmonic_basis(const MetricField& g) {
    const GridSpec& grid = g.grid();

    auto harmonic_rep = [&](int axis) {
        OneFormField e(grid);
        (axis == 0 ? e.comp_x : e.comp_y) = Buffer2D(grid.n, 1.0);
        const ScalarField f = poisson_solve(-1.0 * delta1(e, g), g);
        return e + d0(f);
    };

    OneFormField b1 = harmonic_rep(0);
    OneFormField b2 = harmonic_rep(1);

    // Gram-Schmidt in L2(g), beta1 from dx first.
    b1 = (1.0 / l2_norm(b1, g)) * b1;
    b2 = b2 - inner_product(b2, b1, g) * b1;
    b2 = (1.0 / l2_norm(b2, g)) * b2;

    HarmonicBasis out;
    out.beta1 = std::move(b1);
    out.beta2 = std::move(b2);
    const double g11 = inner_product(out.beta1, out.beta1, g);
    const double g12 = inner_product(out.beta1, out.beta2, g);
    const double g22 = inner_product(out.beta2, out.beta2, g);
    out.gram_residual = std::max({std::abs(g11 - 1.0), std::abs(g12), std::abs(g22 - 1.0)});
    out.periods[0] = cycle_periods(out.beta1);
    out.periods[1] = cycle_periods(out.beta2);
    return out;
}

HodgeSplit hodge_decompose(const OneFormField& phi, const MetricField& g) {
    return hodge_decompose(phi, g, harmonic_basis(g));
}

HodgeSplit hodge_decompose(const OneFormField& phi, const MetricField& g,
                           const HarmonicBasis& basis) {
    require_same_grid(phi.grid, g.grid());
    HodgeSplit out;
    out.potential_f = poisson_solve(delta1(phi, g), g);
    out.exact = d0(out.potential_f);
    out.harmonic_c1 = inner_product(phi, basis.beta1, g);
    out.harmonic_c2 = inner_product(phi, basis.beta2, g);
    out.harmonic = out.harmonic_c1 * basis.beta1 + out.harmonic_c2 * basis.beta2;
    out.coexact = phi - out.exact - out.harmonic;

    // 2-form potential: delta a ~ coexact reduces to d0 s ~ star1(coexact).
    const ScalarField s = poisson_solve(delta1(star1(out.coexact, g), g), g);
    out.potential_a = star0(s, g);
    return out;
}

OneFormField project_closed(const OneFormField& phi, const MetricField& g,
                            const HarmonicBasis& basis) {
    const ScalarField f = poisson_solve(delta1(phi, g), g);
    const double c1 = inner_product(phi, basis.beta1, g);
    const double c2 = inner_product(phi, basis.beta2, g);
    return d0(f) + c1 * basis.beta1 + c2 * basis.beta2;
}

VectorField project_divfree(const VectorField& W, const MetricField& g) {
    const ScalarField q = poisson_solve(delta1(flat_g(W, g), g), g);
    return W - gradient(q, g);
}

VectorField project_symplectic(const VectorField& W, const MetricField& g,
                               const HarmonicBasis& basis) {
    return sharp_omega(project_closed(flat_omega(W, g), g, basis), g);
}

std::pair<double, double> harmonic_coefficients(const VectorField& X, const HarmonicBasis& basis,
                                                const MetricField& g) {
    const OneFormField xb = flat_g(X, g);
    return {inner_product(xb, basis.beta1, g), inner_product(xb, basis.beta2, g)};
}

} // namespace geoflow
