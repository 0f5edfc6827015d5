#include "geoflow/geometry.hpp"

#include <cmath>

#include "geoflow/derivatives.hpp"

namespace geoflow {

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
    require_same_grid(a.grid, b.grid);
    SymTensorField out(a.grid);
    out.t11 = a.t11 + b.t11;
    out.t12 = a.t12 + b.t12;
    out.t22 = a.t22 + b.t22;
    return out;
}

SymTensorField operator*(double s, const SymTensorField& a) {
    SymTensorField out(a.grid);
    out.t11 = s * a.t11;
    out.t12 = s * a.t12;
    out.t22 = s * a.t22;
    return out;
}

ScalarField sym_tensor_apply(const SymTensorField& T, const VectorField& X, const VectorField& Y) {
    require_same_grid(T.grid, X.grid);
    require_same_grid(T.grid, Y.grid);
    ScalarField out(T.grid);
    const int n = T.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values(i, j) = T.t11(i, j) * X.comp_x(i, j) * Y.comp_x(i, j) +
                               T.t12(i, j) * (X.comp_x(i, j) * Y.comp_y(i, j) +
                                              X.comp_y(i, j) * Y.comp_x(i, j)) +
                               T.t22(i, j) * X.comp_y(i, j) * Y.comp_y(i, j);
    return out;
}

SymTensorField metric_tensor(const MetricField& g) {
    SymTensorField out(g.grid());
    out.t11 = g.g11();
    out.t12 = g.g12();
    out.t22 = g.g22();
    return out;
}

ScalarField sym_tensor_trace(const SymTensorField& T, const MetricField& g) {
    require_same_grid(T.grid, g.grid());
    ScalarField out(T.grid);
    const int n = T.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values(i, j) = g.inv11()(i, j) * T.t11(i, j) +
                               2.0 * g.inv12()(i, j) * T.t12(i, j) +
                               g.inv22()(i, j) * T.t22(i, j);
    return out;
}

namespace {

double tensor_norm_squared_integral(const GridSpec& grid, const MetricField& g,
                                    const std::function<double(int, int, int, int)>& at) {
    const double h2 = grid.spacing() * grid.spacing();
    double sum = 0.0;
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double ginv[2][2] = {{g.inv11()(i, j), g.inv12()(i, j)},
                                       {g.inv12()(i, j), g.inv22()(i, j)}};
            double norm2 = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            norm2 += ginv[a][c] * ginv[b][d] * at(a, b, i, j) * at(c, d, i, j);
            sum += norm2 * g.sqrt_det()(i, j);
        }
    return sum * h2;
}

} // namespace

double sym_tensor_l2_norm(const SymTensorField& T, const MetricField& g) {
    require_same_grid(T.grid, g.grid());
    const double s = tensor_norm_squared_integral(
        T.grid, g, [&](int a, int b, int i, int j) { return T.at(a, b, i, j); });
    return std::sqrt(std::max(0.0, s));
}

double two_tensor_l2_norm(const TwoTensorField& T, const MetricField& g) {
    require_same_grid(T.grid, g.grid());
    const double s = tensor_norm_squared_integral(
        T.grid, g, [&](int a, int b, int i, int j) { return T.at(a, b, i, j); });
    return std::sqrt(std::max(0.0, s));
}

ChristoffelField christoffels(const MetricField& g) {
    const GridSpec& grid = g.grid();
    auto [g11x, g11y] = partials(g.g11(), grid);
    auto [g12x, g12y] = partials(g.g12(), grid);
    auto [g22x, g22y] = partials(g.g22(), grid);

    // dg[k][i][j] = d_k g_{ij}
    const Buffer2D* dg[2][2][2];
    dg[0][0][0] = &g11x; dg[1][0][0] = &g11y;
    dg[0][0][1] = &g12x; dg[1][0][1] = &g12y;
    dg[0][1][0] = &g12x; dg[1][1][0] = &g12y;
    dg[0][1][1] = &g22x; dg[1][1][1] = &g22y;

    ChristoffelField out(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double ginv[2][2] = {{g.inv11()(i, j), g.inv12()(i, j)},
                                       {g.inv12()(i, j), g.inv22()(i, j)}};
            for (int k = 0; k < 2; ++k)
                for (int a = 0; a < 2; ++a)
                    for (int b = a; b < 2; ++b) {
                        double v = 0.0;
                        for (int l = 0; l < 2; ++l)
                            v += ginv[k][l] * ((*dg[a][b][l])(i, j) + (*dg[b][a][l])(i, j) -
                                               (*dg[l][a][b])(i, j));
                        v *= 0.5;
                        out.gamma(k, a, b)(i, j) = v;
                        out.gamma(k, b, a)(i, j) = v;
                    }
        }
    return out;
}

VectorField cov_deriv_vec(const VectorField& X, const VectorField& Y, const ChristoffelField& gam) {
    require_same_grid(X.grid, Y.grid);
    require_same_grid(X.grid, gam.grid());
    const GridSpec& grid = X.grid;
    auto [y1x, y1y] = partials(Y.comp_x, grid);
    auto [y2x, y2y] = partials(Y.comp_y, grid);
    VectorField out(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double xc[2] = {X.comp_x(i, j), X.comp_y(i, j)};
            const double yc[2] = {Y.comp_x(i, j), Y.comp_y(i, j)};
            double c1 = xc[0] * y1x(i, j) + xc[1] * y1y(i, j);
            double c2 = xc[0] * y2x(i, j) + xc[1] * y2y(i, j);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    c1 += gam.gamma(0, a, b)(i, j) * xc[a] * yc[b];
                    c2 += gam.gamma(1, a, b)(i, j) * xc[a] * yc[b];
                }
            out.comp_x(i, j) = c1;
            out.comp_y(i, j) = c2;
        }
    return out;
}

TwoTensorField nabla_oneform(const OneFormField& phi, const ChristoffelField& gam) {
    require_same_grid(phi.grid, gam.grid());
    const GridSpec& grid = phi.grid;
    auto [p1x, p1y] = partials(phi.comp_x, grid);
    auto [p2x, p2y] = partials(phi.comp_y, grid);
    TwoTensorField out(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double pc[2] = {phi.comp_x(i, j), phi.comp_y(i, j)};
            auto gamma_term = [&](int a, int b) {
                return gam.gamma(0, a, b)(i, j) * pc[0] + gam.gamma(1, a, b)(i, j) * pc[1];
            };
            out.t11(i, j) = p1x(i, j) - gamma_term(0, 0);
            out.t12(i, j) = p2x(i, j) - gamma_term(0, 1);
            out.t21(i, j) = p1y(i, j) - gamma_term(1, 0);
            out.t22(i, j) = p2y(i, j) - gamma_term(1, 1);
        }
    return out;
}

SymTensorField nabla_sym(const OneFormField& phi, const ChristoffelField& gam) {
    const TwoTensorField nab = nabla_oneform(phi, gam);
    SymTensorField out(nab.grid);
    out.t11 = 2.0 * nab.t11;
    out.t12 = nab.t12 + nab.t21;
    out.t22 = 2.0 * nab.t22;
    return out;
}

double killing_defect(const VectorField& Y, const MetricField& g, const ChristoffelField& gam) {
    return sym_tensor_l2_norm(nabla_sym(flat_g(Y, g), gam), g);
}

double trace_identity_residual(const VectorField& Y, const MetricField& g,
                               const ChristoffelField& gam) {
    const ScalarField div_y = divergence(Y, g);
    SymTensorField S = nabla_sym(flat_g(Y, g), gam);
    S.t11 = S.t11 + hadamard(div_y.values, g.g11());
    S.t12 = S.t12 + hadamard(div_y.values, g.g12());
    S.t22 = S.t22 + hadamard(div_y.values, g.g22());
    const ScalarField tr = sym_tensor_trace(S, g);
    return max_abs(tr - 4.0 * div_y);
}

SymTensorField ricci(const MetricField& g, const ChristoffelField& gam) {
    require_same_grid(g.grid(), gam.grid());
    const GridSpec& grid = g.grid();
    const int n = grid.n;

    // dgam[d][k][i][j] = d_d Gamma^k_{ij}
    Buffer2D dgam[2][2][2][2];
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) {
                auto [gx, gy] = partials(gam.gamma(k, a, b), grid);
                dgam[0][k][a][b] = gx;
                dgam[1][k][a][b] = std::move(gy);
                if (a != b) {
                    dgam[0][k][b][a] = dgam[0][k][a][b];
                    dgam[1][k][b][a] = dgam[1][k][a][b];
                }
            }

    // ric_jk = d_l Gamma^l_{jk} - d_j Gamma^l_{lk}
    //        + Gamma^l_{lm} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{lk}
    Buffer2D r[2][2] = {{Buffer2D(n), Buffer2D(n)}, {Buffer2D(n), Buffer2D(n)}};
    for (int jj = 0; jj < 2; ++jj)
        for (int kk = 0; kk < 2; ++kk)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = 0.0;
                    for (int l = 0; l < 2; ++l) {
                        v += dgam[l][l][jj][kk](i, j) - dgam[jj][l][l][kk](i, j);
                        for (int m = 0; m < 2; ++m)
                            v += gam.gamma(l, l, m)(i, j) * gam.gamma(m, jj, kk)(i, j) -
                                 gam.gamma(l, jj, m)(i, j) * gam.gamma(m, l, kk)(i, j);
                    }
                    r[jj][kk](i, j) = v;
                }

    SymTensorField out(grid);
    out.t11 = r[0][0];
    out.t12 = 0.5 * (r[0][1] + r[1][0]);
    out.t22 = r[1][1];
    return out;
}

ScalarField gauss_curvature(const MetricField& g, const ChristoffelField& gam) {
    const SymTensorField ric = ricci(g, gam);
    ScalarField k = sym_tensor_trace(ric, g);
    return 0.5 * k;
}

double bochner_residual(const OneFormField& phi, const MetricField& g,
                        const ChristoffelField& gam) {
    const double lhs = inner_product(laplacian1(phi, g), phi, g);

    const TwoTensorField nab = nabla_oneform(phi, gam);
    const double grad_term = tensor_norm_squared_integral(
        phi.grid, g, [&](int a, int b, int i, int j) { return nab.at(a, b, i, j); });

    const VectorField v = sharp_g(phi, g);
    const double ric_term = integrate(sym_tensor_apply(ricci(g, gam), v, v), g);

    const double denom = inner_product(phi, phi, g);
    return std::abs(lhs - grad_term - ric_term) / (denom > 0.0 ? denom : 1.0);
}

} // namespace geoflow
