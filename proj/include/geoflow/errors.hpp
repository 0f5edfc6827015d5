#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Expression source could not be parsed; `offset` is the byte position.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

/// Expression evaluation hit a domain violation at a grid node.
class EvalError : public Error {
  public:
    EvalError(const std::string& msg, int i, int j, double x, double y)
        : Error(msg + " at node (" + std::to_string(i) + "," + std::to_string(j) + "), x=" +
                std::to_string(x) + ", y=" + std::to_string(y)),
          i_(i), j_(j) {}
    int node_i() const { return i_; }
    int node_j() const { return j_; }

  private:
    int i_, j_;
};

class GridMismatch : public Error {
  public:
    GridMismatch() : Error("fields live on different grids") {}
};

/// Poisson right-hand side has nonzero mean against the volume form.
class IncompatibleRHS : public Error {
  public:
    explicit IncompatibleRHS(double mean)
        : Error("Poisson right-hand side has nonzero mean " + std::to_string(mean)) {}
};

/// Iterative solver hit its iteration cap before reaching tolerance.
class NoConvergence : public Error {
  public:
    NoConvergence(std::size_t iterations, double residual)
        : Error("solver failed to converge after " + std::to_string(iterations) +
                " iterations, residual " + std::to_string(residual)) {}
};

class NotDivergenceFree : public Error {
  public:
    explicit NotDivergenceFree(double resid)
        : Error("vector field is not divergence-free, residual " + std::to_string(resid)) {}
};

class NotSymplectic : public Error {
  public:
    explicit NotSymplectic(double resid)
        : Error("vector field is not symplectic, d(flat_omega X) residual " + std::to_string(resid)) {}
};

class NotHarmonic : public Error {
  public:
    explicit NotHarmonic(double resid)
        : Error("1-form is not harmonic, residual " + std::to_string(resid)) {}
};

class NotClosed : public Error {
  public:
    explicit NotClosed(double resid)
        : Error("1-form is not closed, residual " + std::to_string(resid)) {}
};

class CFLViolation : public Error {
  public:
    CFLViolation(std::size_t step, double cfl)
        : Error("CFL guard exceeded at step " + std::to_string(step) + ", dt*max|X|/h = " +
                std::to_string(cfl)),
          step_(step) {}
    std::size_t step() const { return step_; }

  private:
    std::size_t step_;
};

class NanDetected : public Error {
  public:
    explicit NanDetected(std::size_t step)
        : Error("non-finite values in state at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const { return step_; }

  private:
    std::size_t step_;
};

/// Bump half-width is below the resolvable limit (eps < 8h).
class EpsTooSmall : public Error {
  public:
    EpsTooSmall(double eps, double h)
        : Error("bump width eps=" + std::to_string(eps) + " under-resolved on grid with h=" +
                std::to_string(h) + " (need eps >= 8h)") {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace geoflow
