#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "geoflow/errors.hpp"

namespace geoflow {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class DiffMode { spectral, fd4 };

/// Doubly periodic n-by-n grid over [0,2pi)^2, nodes x_i = i*h, y_j = j*h.
struct GridSpec {
    int n = 64;
    DiffMode mode = DiffMode::spectral;

    GridSpec() = default;
    GridSpec(int n_, DiffMode mode_ = DiffMode::spectral) : n(n_), mode(mode_) {
        if (n < 16) throw ConfigError("grid size must be at least 16, got " + std::to_string(n));
        if (n % 2 != 0) throw ConfigError("grid size must be even, got " + std::to_string(n));
    }

    double spacing() const { return two_pi / n; }
    double x(int i) const { return spacing() * i; }
    double y(int j) const { return spacing() * j; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    bool operator==(const GridSpec& o) const { return n == o.n && mode == o.mode; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (a != b) throw GridMismatch();
}

/// Row-major n*n sample buffer; index (i,j) with i along x, j along y.
class Buffer2D {
  public:
    Buffer2D() = default;
    explicit Buffer2D(int n, double fill = 0.0) : n_(n), v_(static_cast<std::size_t>(n) * n, fill) {}

    double& operator()(int i, int j) { return v_[idx(i, j)]; }
    double operator()(int i, int j) const { return v_[idx(i, j)]; }

    /// Periodic accessor: indices wrapped mod n.
    double wrap(int i, int j) const {
        i %= n_; if (i < 0) i += n_;
        j %= n_; if (j < 0) j += n_;
        return v_[idx(i, j)];
    }

    int n() const { return n_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

  private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    int n_ = 0;
    std::vector<double> v_;
};

struct ScalarField {
    GridSpec grid;
    Buffer2D values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), values(g.n, fill) {}
    ScalarField(const GridSpec& g, const std::function<double(double, double)>& f) : grid(g), values(g.n) {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) values(i, j) = f(g.x(i), g.y(j));
    }
};

/// 1-form phi = comp_x dx + comp_y dy (covariant components in the global chart).
struct OneFormField {
    GridSpec grid;
    Buffer2D comp_x, comp_y;

    OneFormField() = default;
    explicit OneFormField(const GridSpec& g) : grid(g), comp_x(g.n), comp_y(g.n) {}
};

/// 2-form alpha = density dx^dy.
struct TwoFormField {
    GridSpec grid;
    Buffer2D density;

    TwoFormField() = default;
    explicit TwoFormField(const GridSpec& g) : grid(g), density(g.n) {}
};

/// Vector field X = comp_x d/dx + comp_y d/dy (contravariant components).
struct VectorField {
    GridSpec grid;
    Buffer2D comp_x, comp_y;

    VectorField() = default;
    explicit VectorField(const GridSpec& g) : grid(g), comp_x(g.n), comp_y(g.n) {}
};

/// Pointwise SPD metric with cached determinant and inverse. The volume form
/// is mu = sqrt_det dx^dy and doubles as the symplectic form omega.
class MetricField {
  public:
    MetricField() = default;
    MetricField(const GridSpec& g, Buffer2D g11, Buffer2D g12, Buffer2D g22);

    static MetricField flat(const GridSpec& g);
    /// g = e^{2 phi} (dx^2 + dy^2).
    static MetricField conformal(const ScalarField& phi);
    static MetricField general(const GridSpec& g, const std::function<double(double, double)>& g11,
                               const std::function<double(double, double)>& g12,
                               const std::function<double(double, double)>& g22);

    const GridSpec& grid() const { return grid_; }
    const Buffer2D& g11() const { return g11_; }
    const Buffer2D& g12() const { return g12_; }
    const Buffer2D& g22() const { return g22_; }
    const Buffer2D& det() const { return det_; }
    const Buffer2D& sqrt_det() const { return sqrt_det_; }
    const Buffer2D& inv11() const { return inv11_; }
    const Buffer2D& inv12() const { return inv12_; }
    const Buffer2D& inv22() const { return inv22_; }

    /// True when every component is the same at all nodes (spectral Poisson
    /// solves then reduce to a single transform pair).
    bool is_constant() const { return constant_; }
    bool is_flat() const { return flat_; }

  private:
    GridSpec grid_;
    Buffer2D g11_, g12_, g22_;
    Buffer2D det_, sqrt_det_, inv11_, inv12_, inv22_;
    bool constant_ = false;
    bool flat_ = false;
};

inline bool all_finite(const Buffer2D& b) {
    for (double v : b.values())
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace geoflow
