#pragma once

#include "geoflow/calculus.hpp"
#include "geoflow/grid.hpp"

namespace geoflow {

/// Christoffel symbols of the Levi-Civita connection, Gamma^k_{ij},
/// symmetric in (i,j). Indices are 0 (x) and 1 (y).
class ChristoffelField {
  public:
    ChristoffelField() = default;
    explicit ChristoffelField(const GridSpec& g) : grid_(g) {
        for (auto& row : gamma_)
            for (auto& col : row)
                for (auto& b : col) b = Buffer2D(g.n);
    }

    Buffer2D& gamma(int k, int i, int j) { return gamma_[k][i][j]; }
    const Buffer2D& gamma(int k, int i, int j) const { return gamma_[k][i][j]; }
    const GridSpec& grid() const { return grid_; }

  private:
    GridSpec grid_;
    Buffer2D gamma_[2][2][2];
};

/// Symmetric (0,2)-tensor, three stored components.
struct SymTensorField {
    GridSpec grid;
    Buffer2D t11, t12, t22;

    SymTensorField() = default;
    explicit SymTensorField(const GridSpec& g) : grid(g), t11(g.n), t12(g.n), t22(g.n) {}

    double at(int c0, int c1, int i, int j) const {
        if (c0 == 0 && c1 == 0) return t11(i, j);
        if (c0 == 1 && c1 == 1) return t22(i, j);
        return t12(i, j);
    }
};

/// Full (0,2)-tensor, e.g. the covariant derivative of a 1-form.
struct TwoTensorField {
    GridSpec grid;
    Buffer2D t11, t12, t21, t22;

    TwoTensorField() = default;
    explicit TwoTensorField(const GridSpec& g) : grid(g), t11(g.n), t12(g.n), t21(g.n), t22(g.n) {}

    double at(int c0, int c1, int i, int j) const {
        if (c0 == 0) return c1 == 0 ? t11(i, j) : t12(i, j);
        return c1 == 0 ? t21(i, j) : t22(i, j);
    }
};

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(double s, const SymTensorField& a);

/// T(X,Y) pointwise.
ScalarField sym_tensor_apply(const SymTensorField& T, const VectorField& X, const VectorField& Y);
/// The metric itself as a symmetric tensor.
SymTensorField metric_tensor(const MetricField& g);
/// g^{ij} T_ij pointwise.
ScalarField sym_tensor_trace(const SymTensorField& T, const MetricField& g);
/// sqrt( int g^{ik} g^{jl} T_ij T_kl mu ).
double sym_tensor_l2_norm(const SymTensorField& T, const MetricField& g);
double two_tensor_l2_norm(const TwoTensorField& T, const MetricField& g);

/// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelField christoffels(const MetricField& g);

/// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j.
VectorField cov_deriv_vec(const VectorField& X, const VectorField& Y, const ChristoffelField& gam);

/// nabla_i phi_j = d_i phi_j - Gamma^k_{ij} phi_k, full tensor.
TwoTensorField nabla_oneform(const OneFormField& phi, const ChristoffelField& gam);

/// (nabla phi)^sym_ij = nabla_i phi_j + nabla_j phi_i (no 1/2).
SymTensorField nabla_sym(const OneFormField& phi, const ChristoffelField& gam);

/// L2 norm of (nabla flat Y)^sym; zero iff Y is a discrete Killing field.
double killing_defect(const VectorField& Y, const MetricField& g, const ChristoffelField& gam);

/// max | tr_g[(nabla flat Y)^sym + (div Y) g] - 4 div Y |.
double trace_identity_residual(const VectorField& Y, const MetricField& g,
                               const ChristoffelField& gam);

/// Ricci tensor assembled from Gamma and its grid partials, with the sign
/// fixed so that ric is positive-definite for sphere-like metrics (validated
/// by the Bochner identity and the conformal closed-form curvature).
SymTensorField ricci(const MetricField& g, const ChristoffelField& gam);

/// K = tr_g(ric) / 2; in 2D ric = K g.
ScalarField gauss_curvature(const MetricField& g, const ChristoffelField& gam);

/// | <lap1 phi, phi> - ||nabla phi||^2 - int ric(phi,phi) mu | / <phi,phi>.
double bochner_residual(const OneFormField& phi, const MetricField& g, const ChristoffelField& gam);

} // namespace geoflow
