#include "geoflow/grid.hpp"

#include <cmath>

namespace geoflow {

MetricField::MetricField(const GridSpec& g, Buffer2D g11, Buffer2D g12, Buffer2D g22)
    : grid_(g), g11_(std::move(g11)), g12_(std::move(g12)), g22_(std::move(g22)) {
    const int n = g.n;
    det_ = Buffer2D(n);
    sqrt_det_ = Buffer2D(n);
    inv11_ = Buffer2D(n);
    inv12_ = Buffer2D(n);
    inv22_ = Buffer2D(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = g11_(i, j), b = g12_(i, j), c = g22_(i, j);
            const double d = a * c - b * b;
            if (!(a > 0.0) || !(d > 0.0))
                throw ConfigError("metric is not SPD at node (" + std::to_string(i) + "," +
                                  std::to_string(j) + "): g11=" + std::to_string(a) +
                                  ", det=" + std::to_string(d));
            det_(i, j) = d;
            sqrt_det_(i, j) = std::sqrt(d);
            inv11_(i, j) = c / d;
            inv12_(i, j) = -b / d;
            inv22_(i, j) = a / d;
        }
    }
    constant_ = true;
    const double a0 = g11_(0, 0), b0 = g12_(0, 0), c0 = g22_(0, 0);
    for (int i = 0; i < n && constant_; ++i)
        for (int j = 0; j < n; ++j)
            if (g11_(i, j) != a0 || g12_(i, j) != b0 || g22_(i, j) != c0) {
                constant_ = false;
                break;
            }
    flat_ = constant_ && a0 == 1.0 && b0 == 0.0 && c0 == 1.0;
}

MetricField MetricField::flat(const GridSpec& g) {
    return MetricField(g, Buffer2D(g.n, 1.0), Buffer2D(g.n, 0.0), Buffer2D(g.n, 1.0));
}

MetricField MetricField::conformal(const ScalarField& phi) {
    const GridSpec& g = phi.grid;
    Buffer2D g11(g.n), g12(g.n, 0.0), g22(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double e = std::exp(2.0 * phi.values(i, j));
            g11(i, j) = e;
            g22(i, j) = e;
        }
    return MetricField(g, std::move(g11), std::move(g12), std::move(g22));
}

MetricField MetricField::general(const GridSpec& g, const std::function<double(double, double)>& g11,
                                 const std::function<double(double, double)>& g12,
                                 const std::function<double(double, double)>& g22) {
    Buffer2D a(g.n), b(g.n), c(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            a(i, j) = g11(g.x(i), g.y(j));
            b(i, j) = g12(g.x(i), g.y(j));
            c(i, j) = g22(g.x(i), g.y(j));
        }
    return MetricField(g, std::move(a), std::move(b), std::move(c));
}

} // namespace geoflow
