#include "geoflow/calculus.hpp"

#include <cmath>

#include "geoflow/derivatives.hpp"
#include "geoflow/fieldexpr.hpp"

namespace geoflow {

namespace {

Buffer2D zip(const Buffer2D& a, const Buffer2D& b, double (*op)(double, double)) {
    Buffer2D out(a.n());
    for (std::size_t k = 0; k < a.size(); ++k)
        out.values()[k] = op(a.values()[k], b.values()[k]);
    return out;
}

} // namespace

Buffer2D operator+(const Buffer2D& a, const Buffer2D& b) {
    return zip(a, b, +[](double x, double y) { return x + y; });
}
Buffer2D operator-(const Buffer2D& a, const Buffer2D& b) {
    return zip(a, b, +[](double x, double y) { return x - y; });
}
Buffer2D operator*(double s, const Buffer2D& a) {
    Buffer2D out(a.n());
    for (std::size_t k = 0; k < a.size(); ++k) out.values()[k] = s * a.values()[k];
    return out;
}
Buffer2D hadamard(const Buffer2D& a, const Buffer2D& b) {
    return zip(a, b, +[](double x, double y) { return x * y; });
}
double max_abs(const Buffer2D& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out(a.grid);
    out.values = a.values + b.values;
    return out;
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out(a.grid);
    out.values = a.values - b.values;
    return out;
}
ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out(a.grid);
    out.values = s * a.values;
    return out;
}
OneFormField operator+(const OneFormField& a, const OneFormField& b) {
    require_same_grid(a.grid, b.grid);
    OneFormField out(a.grid);
    out.comp_x = a.comp_x + b.comp_x;
    out.comp_y = a.comp_y + b.comp_y;
    return out;
}
OneFormField operator-(const OneFormField& a, const OneFormField& b) {
    require_same_grid(a.grid, b.grid);
    OneFormField out(a.grid);
    out.comp_x = a.comp_x - b.comp_x;
    out.comp_y = a.comp_y - b.comp_y;
    return out;
}
OneFormField operator*(double s, const OneFormField& a) {
    OneFormField out(a.grid);
    out.comp_x = s * a.comp_x;
    out.comp_y = s * a.comp_y;
    return out;
}
TwoFormField operator+(const TwoFormField& a, const TwoFormField& b) {
    require_same_grid(a.grid, b.grid);
    TwoFormField out(a.grid);
    out.density = a.density + b.density;
    return out;
}
TwoFormField operator-(const TwoFormField& a, const TwoFormField& b) {
    require_same_grid(a.grid, b.grid);
    TwoFormField out(a.grid);
    out.density = a.density - b.density;
    return out;
}
TwoFormField operator*(double s, const TwoFormField& a) {
    TwoFormField out(a.grid);
    out.density = s * a.density;
    return out;
}
VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    VectorField out(a.grid);
    out.comp_x = a.comp_x + b.comp_x;
    out.comp_y = a.comp_y + b.comp_y;
    return out;
}
VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    VectorField out(a.grid);
    out.comp_x = a.comp_x - b.comp_x;
    out.comp_y = a.comp_y - b.comp_y;
    return out;
}
VectorField operator*(double s, const VectorField& a) {
    VectorField out(a.grid);
    out.comp_x = s * a.comp_x;
    out.comp_y = s * a.comp_y;
    return out;
}

double max_abs(const ScalarField& f) { return max_abs(f.values); }
double max_abs(const OneFormField& f) { return std::max(max_abs(f.comp_x), max_abs(f.comp_y)); }
double max_abs(const TwoFormField& f) { return max_abs(f.density); }
double max_abs(const VectorField& f) { return std::max(max_abs(f.comp_x), max_abs(f.comp_y)); }

OneFormField d0(const ScalarField& f) {
    OneFormField out(f.grid);
    auto [dx, dy] = partials(f.values, f.grid);
    out.comp_x = std::move(dx);
    out.comp_y = std::move(dy);
    return out;
}

TwoFormField d1(const OneFormField& phi) {
    TwoFormField out(phi.grid);
    out.density = partial_x(phi.comp_y, phi.grid) - partial_y(phi.comp_x, phi.grid);
    return out;
}

namespace {

/// (sharp phi)^i = g^{ij} phi_j, as raw buffers.
std::pair<Buffer2D, Buffer2D> raise_indices(const OneFormField& phi, const MetricField& g) {
    const int n = phi.grid.n;
    Buffer2D u(n), v(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            u(i, j) = g.inv11()(i, j) * phi.comp_x(i, j) + g.inv12()(i, j) * phi.comp_y(i, j);
            v(i, j) = g.inv12()(i, j) * phi.comp_x(i, j) + g.inv22()(i, j) * phi.comp_y(i, j);
        }
    return {std::move(u), std::move(v)};
}

} // namespace

TwoFormField star0(const ScalarField& f, const MetricField& g) {
    require_same_grid(f.grid, g.grid());
    TwoFormField out(f.grid);
    out.density = hadamard(f.values, g.sqrt_det());
    return out;
}

OneFormField star1(const OneFormField& phi, const MetricField& g) {
    require_same_grid(phi.grid, g.grid());
    auto [u, v] = raise_indices(phi, g);
    OneFormField out(phi.grid);
    const int n = phi.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sd = g.sqrt_det()(i, j);
            out.comp_x(i, j) = -sd * v(i, j);
            out.comp_y(i, j) = sd * u(i, j);
        }
    return out;
}

ScalarField star2(const TwoFormField& alpha, const MetricField& g) {
    require_same_grid(alpha.grid, g.grid());
    ScalarField out(alpha.grid);
    const int n = alpha.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.values(i, j) = alpha.density(i, j) / g.sqrt_det()(i, j);
    return out;
}

ScalarField delta1(const OneFormField& phi, const MetricField& g) {
    require_same_grid(phi.grid, g.grid());
    auto [u, v] = raise_indices(phi, g);
    Buffer2D du = hadamard(g.sqrt_det(), u);
    Buffer2D dv = hadamard(g.sqrt_det(), v);
    Buffer2D div = partial_x(du, phi.grid) + partial_y(dv, phi.grid);
    ScalarField out(phi.grid);
    const int n = phi.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.values(i, j) = -div(i, j) / g.sqrt_det()(i, j);
    return out;
}

OneFormField delta2(const TwoFormField& alpha, const MetricField& g) {
    require_same_grid(alpha.grid, g.grid());
    const ScalarField w = star2(alpha, g);
    auto [wx, wy] = partials(w.values, alpha.grid);
    OneFormField out(alpha.grid);
    const int n = alpha.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v1 = wy(i, j) / g.sqrt_det()(i, j);
            const double v2 = -wx(i, j) / g.sqrt_det()(i, j);
            out.comp_x(i, j) = g.g11()(i, j) * v1 + g.g12()(i, j) * v2;
            out.comp_y(i, j) = g.g12()(i, j) * v1 + g.g22()(i, j) * v2;
        }
    return out;
}

ScalarField laplacian0(const ScalarField& f, const MetricField& g) { return delta1(d0(f), g); }

OneFormField laplacian1(const OneFormField& phi, const MetricField& g) {
    return d0(delta1(phi, g)) + delta2(d1(phi), g);
}

VectorField sharp_g(const OneFormField& phi, const MetricField& g) {
    require_same_grid(phi.grid, g.grid());
    auto [u, v] = raise_indices(phi, g);
    VectorField out(phi.grid);
    out.comp_x = std::move(u);
    out.comp_y = std::move(v);
    return out;
}

OneFormField flat_g(const VectorField& X, const MetricField& g) {
    require_same_grid(X.grid, g.grid());
    OneFormField out(X.grid);
    const int n = X.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.comp_x(i, j) = g.g11()(i, j) * X.comp_x(i, j) + g.g12()(i, j) * X.comp_y(i, j);
            out.comp_y(i, j) = g.g12()(i, j) * X.comp_x(i, j) + g.g22()(i, j) * X.comp_y(i, j);
        }
    return out;
}

VectorField sharp_omega(const OneFormField& phi, const MetricField& g) {
    require_same_grid(phi.grid, g.grid());
    VectorField out(phi.grid);
    const int n = phi.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sd = g.sqrt_det()(i, j);
            out.comp_x(i, j) = phi.comp_y(i, j) / sd;
            out.comp_y(i, j) = -phi.comp_x(i, j) / sd;
        }
    return out;
}

OneFormField flat_omega(const VectorField& X, const MetricField& g) {
    require_same_grid(X.grid, g.grid());
    OneFormField out(X.grid);
    const int n = X.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sd = g.sqrt_det()(i, j);
            out.comp_x(i, j) = -sd * X.comp_y(i, j);
            out.comp_y(i, j) = sd * X.comp_x(i, j);
        }
    return out;
}

VectorField rotate_j(const VectorField& X, const MetricField& g) {
    require_same_grid(X.grid, g.grid());
    VectorField out(X.grid);
    const int n = X.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sd = g.sqrt_det()(i, j);
            out.comp_x(i, j) = -(g.g12()(i, j) * X.comp_x(i, j) + g.g22()(i, j) * X.comp_y(i, j)) / sd;
            out.comp_y(i, j) = (g.g11()(i, j) * X.comp_x(i, j) + g.g12()(i, j) * X.comp_y(i, j)) / sd;
        }
    return out;
}

double integrate(const ScalarField& f, const MetricField& g) {
    require_same_grid(f.grid, g.grid());
    const double h2 = f.grid.spacing() * f.grid.spacing();
    double sum = 0.0;
    const int n = f.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += f.values(i, j) * g.sqrt_det()(i, j);
    return sum * h2;
}

double integrate_two_form(const TwoFormField& alpha) {
    const double h2 = alpha.grid.spacing() * alpha.grid.spacing();
    double sum = 0.0;
    for (double v : alpha.density.values()) sum += v;
    return sum * h2;
}

double inner_product(const ScalarField& a, const ScalarField& b, const MetricField& g) {
    require_same_grid(a.grid, b.grid);
    require_same_grid(a.grid, g.grid());
    const double h2 = a.grid.spacing() * a.grid.spacing();
    double sum = 0.0;
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += a.values(i, j) * b.values(i, j) * g.sqrt_det()(i, j);
    return sum * h2;
}

double inner_product(const OneFormField& a, const OneFormField& b, const MetricField& g) {
    require_same_grid(a.grid, b.grid);
    require_same_grid(a.grid, g.grid());
    const double h2 = a.grid.spacing() * a.grid.spacing();
    double sum = 0.0;
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double pair = g.inv11()(i, j) * a.comp_x(i, j) * b.comp_x(i, j) +
                                g.inv12()(i, j) * (a.comp_x(i, j) * b.comp_y(i, j) +
                                                   a.comp_y(i, j) * b.comp_x(i, j)) +
                                g.inv22()(i, j) * a.comp_y(i, j) * b.comp_y(i, j);
            sum += pair * g.sqrt_det()(i, j);
        }
    return sum * h2;
}

double inner_product(const TwoFormField& a, const TwoFormField& b, const MetricField& g) {
    require_same_grid(a.grid, b.grid);
    require_same_grid(a.grid, g.grid());
    const double h2 = a.grid.spacing() * a.grid.spacing();
    double sum = 0.0;
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sum += a.density(i, j) * b.density(i, j) / g.sqrt_det()(i, j);
    return sum * h2;
}

double inner_product(const VectorField& a, const VectorField& b, const MetricField& g) {
    require_same_grid(a.grid, b.grid);
    require_same_grid(a.grid, g.grid());
    const double h2 = a.grid.spacing() * a.grid.spacing();
    double sum = 0.0;
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double pair = g.g11()(i, j) * a.comp_x(i, j) * b.comp_x(i, j) +
                                g.g12()(i, j) * (a.comp_x(i, j) * b.comp_y(i, j) +
                                                 a.comp_y(i, j) * b.comp_x(i, j)) +
                                g.g22()(i, j) * a.comp_y(i, j) * b.comp_y(i, j);
            sum += pair * g.sqrt_det()(i, j);
        }
    return sum * h2;
}

double l2_norm(const ScalarField& a, const MetricField& g) { return std::sqrt(std::max(0.0, inner_product(a, a, g))); }
double l2_norm(const OneFormField& a, const MetricField& g) { return std::sqrt(std::max(0.0, inner_product(a, a, g))); }
double l2_norm(const TwoFormField& a, const MetricField& g) { return std::sqrt(std::max(0.0, inner_product(a, a, g))); }
double l2_norm(const VectorField& a, const MetricField& g) { return std::sqrt(std::max(0.0, inner_product(a, a, g))); }

ScalarField vector_pairing(const VectorField& X, const VectorField& Y, const MetricField& g) {
    require_same_grid(X.grid, Y.grid);
    ScalarField out(X.grid);
    const int n = X.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values(i, j) = g.g11()(i, j) * X.comp_x(i, j) * Y.comp_x(i, j) +
                               g.g12()(i, j) * (X.comp_x(i, j) * Y.comp_y(i, j) +
                                                X.comp_y(i, j) * Y.comp_x(i, j)) +
                               g.g22()(i, j) * X.comp_y(i, j) * Y.comp_y(i, j);
    return out;
}

ScalarField oneform_pairing(const OneFormField& a, const OneFormField& b, const MetricField& g) {
    require_same_grid(a.grid, b.grid);
    ScalarField out(a.grid);
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values(i, j) = g.inv11()(i, j) * a.comp_x(i, j) * b.comp_x(i, j) +
                               g.inv12()(i, j) * (a.comp_x(i, j) * b.comp_y(i, j) +
                                                  a.comp_y(i, j) * b.comp_x(i, j)) +
                               g.inv22()(i, j) * a.comp_y(i, j) * b.comp_y(i, j);
    return out;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    require_same_grid(X.grid, Y.grid);
    const GridSpec& grid = X.grid;
    auto [y1x, y1y] = partials(Y.comp_x, grid);
    auto [y2x, y2y] = partials(Y.comp_y, grid);
    auto [x1x, x1y] = partials(X.comp_x, grid);
    auto [x2x, x2y] = partials(X.comp_y, grid);
    VectorField out(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.comp_x(i, j) = X.comp_x(i, j) * y1x(i, j) + X.comp_y(i, j) * y1y(i, j) -
                               Y.comp_x(i, j) * x1x(i, j) - Y.comp_y(i, j) * x1y(i, j);
            out.comp_y(i, j) = X.comp_x(i, j) * y2x(i, j) + X.comp_y(i, j) * y2y(i, j) -
                               Y.comp_x(i, j) * x2x(i, j) - Y.comp_y(i, j) * x2y(i, j);
        }
    return out;
}

OneFormField lie_deriv_oneform(const VectorField& Y, const OneFormField& phi) {
    require_same_grid(Y.grid, phi.grid);
    const GridSpec& grid = phi.grid;
    auto [p1x, p1y] = partials(phi.comp_x, grid);
    auto [p2x, p2y] = partials(phi.comp_y, grid);
    auto [y1x, y1y] = partials(Y.comp_x, grid);
    auto [y2x, y2y] = partials(Y.comp_y, grid);
    OneFormField out(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.comp_x(i, j) = Y.comp_x(i, j) * p1x(i, j) + Y.comp_y(i, j) * p1y(i, j) +
                               phi.comp_x(i, j) * y1x(i, j) + phi.comp_y(i, j) * y2x(i, j);
            out.comp_y(i, j) = Y.comp_x(i, j) * p2x(i, j) + Y.comp_y(i, j) * p2y(i, j) +
                               phi.comp_x(i, j) * y1y(i, j) + phi.comp_y(i, j) * y2y(i, j);
        }
    return out;
}

ScalarField divergence(const VectorField& X, const MetricField& g) {
    ScalarField d = delta1(flat_g(X, g), g);
    return -1.0 * d;
}

VectorField gradient(const ScalarField& f, const MetricField& g) { return sharp_g(d0(f), g); }

TwoFormField wedge11(const OneFormField& phi, const OneFormField& psi) {
    require_same_grid(phi.grid, psi.grid);
    TwoFormField out(phi.grid);
    const int n = phi.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.density(i, j) =
                phi.comp_x(i, j) * psi.comp_y(i, j) - phi.comp_y(i, j) * psi.comp_x(i, j);
    return out;
}

OneFormField pointwise_scale(const ScalarField& s, const OneFormField& phi) {
    require_same_grid(s.grid, phi.grid);
    OneFormField out(phi.grid);
    out.comp_x = hadamard(s.values, phi.comp_x);
    out.comp_y = hadamard(s.values, phi.comp_y);
    return out;
}

TwoFormField pointwise_scale(const ScalarField& s, const TwoFormField& alpha) {
    require_same_grid(s.grid, alpha.grid);
    TwoFormField out(alpha.grid);
    out.density = hadamard(s.values, alpha.density);
    return out;
}

ScalarField oneform_apply(const OneFormField& phi, const VectorField& X) {
    require_same_grid(phi.grid, X.grid);
    ScalarField out(phi.grid);
    out.values = hadamard(phi.comp_x, X.comp_x) + hadamard(phi.comp_y, X.comp_y);
    return out;
}

ScalarField eval_expression(const std::string& expr, const GridSpec& grid) {
    return fieldexpr::evaluate(*fieldexpr::parse(expr), grid);
}

} // namespace geoflow
