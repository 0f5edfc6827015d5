#include "geoflow/derivatives.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace geoflow {

namespace {

// FFTW plan creation is not thread-safe; execution through the new-array
// interface is, provided each call uses its own buffers. Plans are created
// once per grid size with FFTW_ESTIMATE (deterministic algorithm choice) and
// FFTW_UNALIGNED so they accept any caller buffer.
class PlanCache {
  public:
    struct Plans {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
        ~Plans() {
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
        }
    };

    static const Plans& get(int n) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mu_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return *it->second;

        auto plans = std::make_unique<Plans>();
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        plans->fwd = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans->bwd = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        auto [pos, inserted] = cache.plans_.emplace(n, std::move(plans));
        return *pos->second;
    }

  private:
    std::mutex mu_;
    std::map<int, std::unique_ptr<Plans>> plans_;
};

using cvec = std::vector<std::complex<double>>;

void fft_forward(const Buffer2D& f, cvec& out, int n) {
    out.resize(static_cast<std::size_t>(n) * n);
    const double* src = f.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = src[k];
    auto* p = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(PlanCache::get(n).fwd, p, p);
}

void fft_backward_real(cvec& in, Buffer2D& out, int n) {
    auto* p = reinterpret_cast<fftw_complex*>(in.data());
    fftw_execute_dft(PlanCache::get(n).bwd, p, p);
    const double scale = 1.0 / (static_cast<double>(n) * n);
    double* dst = out.data();
    for (std::size_t k = 0; k < in.size(); ++k) dst[k] = in[k].real() * scale;
}

/// Signed wavenumber for index i on an n-grid; Nyquist mapped to zero.
inline int wavenumber(int i, int n) {
    if (i < n / 2) return i;
    if (i == n / 2) return 0;
    return i - n;
}

Buffer2D spectral_derivative(const Buffer2D& f, const GridSpec& grid, int axis) {
    const int n = grid.n;
    cvec hat;
    fft_forward(f, hat, n);
    for (int i = 0; i < n; ++i) {
        const int ki = wavenumber(i, n);
        for (int j = 0; j < n; ++j) {
            const int kj = wavenumber(j, n);
            const double k = axis == 0 ? ki : kj;
            const std::complex<double> v = hat[static_cast<std::size_t>(i) * n + j];
            hat[static_cast<std::size_t>(i) * n + j] = std::complex<double>(-k * v.imag(), k * v.real());
        }
    }
    Buffer2D out(n);
    fft_backward_real(hat, out, n);
    return out;
}

Buffer2D fd4_derivative(const Buffer2D& f, const GridSpec& grid, int axis) {
    const int n = grid.n;
    const double c = 1.0 / (12.0 * grid.spacing());
    Buffer2D out(n);
    auto at = [&](int i, int j) {
        i = (i % n + n) % n;
        j = (j % n + n) % n;
        return f(i, j);
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double m2, m1, p1, p2;
            if (axis == 0) {
                m2 = at(i - 2, j); m1 = at(i - 1, j); p1 = at(i + 1, j); p2 = at(i + 2, j);
            } else {
                m2 = at(i, j - 2); m1 = at(i, j - 1); p1 = at(i, j + 1); p2 = at(i, j + 2);
            }
            out(i, j) = c * (m2 - 8.0 * m1 + 8.0 * p1 - p2);
        }
    return out;
}

Buffer2D derivative(const Buffer2D& f, const GridSpec& grid, int axis) {
    return grid.mode == DiffMode::spectral ? spectral_derivative(f, grid, axis)
                                           : fd4_derivative(f, grid, axis);
}

} // namespace

Buffer2D partial_x(const Buffer2D& f, const GridSpec& grid) { return derivative(f, grid, 0); }
Buffer2D partial_y(const Buffer2D& f, const GridSpec& grid) { return derivative(f, grid, 1); }

std::pair<Buffer2D, Buffer2D> partials(const Buffer2D& f, const GridSpec& grid) {
    const int n = grid.n;
    if (grid.mode == DiffMode::fd4)
        return {fd4_derivative(f, grid, 0), fd4_derivative(f, grid, 1)};

    cvec hat;
    fft_forward(f, hat, n);
    cvec hx(hat.size()), hy(hat.size());
    for (int i = 0; i < n; ++i) {
        const int ki = wavenumber(i, n);
        for (int j = 0; j < n; ++j) {
            const int kj = wavenumber(j, n);
            const std::complex<double> v = hat[static_cast<std::size_t>(i) * n + j];
            hx[static_cast<std::size_t>(i) * n + j] = std::complex<double>(-ki * v.imag(), ki * v.real());
            hy[static_cast<std::size_t>(i) * n + j] = std::complex<double>(-kj * v.imag(), kj * v.real());
        }
    }
    Buffer2D dx(n), dy(n);
    fft_backward_real(hx, dx, n);
    fft_backward_real(hy, dy, n);
    return {std::move(dx), std::move(dy)};
}

Buffer2D dealias(const Buffer2D& f, const GridSpec& grid) {
    Buffer2D out = f;
    dealias_inplace(out, grid);
    return out;
}

void dealias_inplace(Buffer2D& f, const GridSpec& grid) {
    if (grid.mode == DiffMode::fd4) return;
    const int n = grid.n;
    const int kmax = n / 3;
    cvec hat;
    fft_forward(f, hat, n);
    for (int i = 0; i < n; ++i) {
        const int ki = i <= n / 2 ? i : i - n; // keep |Nyquist| so it gets cut
        for (int j = 0; j < n; ++j) {
            const int kj = j <= n / 2 ? j : j - n;
            if (std::abs(ki) > kmax || std::abs(kj) > kmax)
                hat[static_cast<std::size_t>(i) * n + j] = 0.0;
        }
    }
    fft_backward_real(hat, f, n);
}

Buffer2D flat_inverse_laplacian(const Buffer2D& r, const GridSpec& grid) {
    return const_coeff_inverse(r, grid, 1.0, 0.0, 1.0);
}

Buffer2D const_coeff_inverse(const Buffer2D& r, const GridSpec& grid, double c11, double c12,
                             double c22) {
    const int n = grid.n;
    cvec hat;
    fft_forward(r, hat, n);
    for (int i = 0; i < n; ++i) {
        const int ki = wavenumber(i, n);
        for (int j = 0; j < n; ++j) {
            const int kj = wavenumber(j, n);
            const double sym = c11 * ki * ki + 2.0 * c12 * ki * kj + c22 * kj * kj;
            auto& v = hat[static_cast<std::size_t>(i) * n + j];
            v = sym > 0.0 ? v / sym : 0.0;
        }
    }
    Buffer2D out(n);
    fft_backward_real(hat, out, n);
    return out;
}

} // namespace geoflow
