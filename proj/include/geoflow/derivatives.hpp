#pragma once

#include <utility>

#include "geoflow/grid.hpp"

namespace geoflow {

/// Partial derivative along x (axis 0) or y (axis 1) with periodic wrap.
/// Spectral mode zeroes the Nyquist mode so the stencil stays antisymmetric;
/// fd4 mode uses the 4th-order central stencil. Either way the discrete
/// operator D satisfies D^T = -D, which is what makes the codifferential an
/// exact adjoint downstream.
Buffer2D partial_x(const Buffer2D& f, const GridSpec& grid);
Buffer2D partial_y(const Buffer2D& f, const GridSpec& grid);

/// Both partials with a single forward transform in spectral mode.
std::pair<Buffer2D, Buffer2D> partials(const Buffer2D& f, const GridSpec& grid);

/// 2/3-rule truncation of Fourier modes (|k| > n/3 zeroed). Identity in fd4 mode.
Buffer2D dealias(const Buffer2D& f, const GridSpec& grid);
void dealias_inplace(Buffer2D& f, const GridSpec& grid);

/// Solve -lap_flat u = r spectrally with zero-mean gauge (mean of r ignored).
/// Used as the preconditioner for variable-coefficient Poisson problems and
/// as the direct solver for constant metrics.
Buffer2D flat_inverse_laplacian(const Buffer2D& r, const GridSpec& grid);

/// Solve -div(C grad u) = r for a constant SPD coefficient matrix
/// C = [[c11,c12],[c12,c22]] spectrally, zero-mean gauge.
Buffer2D const_coeff_inverse(const Buffer2D& r, const GridSpec& grid, double c11, double c12,
                             double c22);

} // namespace geoflow
