#pragma once

// Grid-sampled stand-ins for Schwartz functions on R^n: sampling, weighted
// finite-difference seminorms, radial decay fits, the e(s) = exp(2 pi i s)
// Fourier transform and Gaussian-regularized oscillatory integrals.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace nct {

using cplx = std::complex<double>;

/// e(s) = exp(2 pi i s).
cplx e_phase(double s);

/// Uniform box [-L, L)^n with step h; 2L/h must be a positive even integer.
/// Points are x_j = -L + j h, so the origin is the sample j = N/2.
class GridSpec {
 public:
  GridSpec(int dim, double half_width, double step);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  double step() const { return step_; }
  int points_per_axis() const { return n_axis_; }
  std::size_t size() const { return size_; }
  double coord(int index) const { return -half_width_ + index * step_; }

  /// Multi-index of a flat point index (axis 0 varies slowest).
  void unflatten(std::size_t flat, std::span<int> index) const;
  std::size_t flatten(std::span<const int> index) const;
  void point(std::size_t flat, std::span<double> x) const;
  double radius(std::size_t flat) const;
  /// Flat index of the integer lattice offset, or npos if outside the box.
  std::size_t locate(std::span<const int> index) const;

  /// Grid of the Fourier dual: L' = 1/(2h), h' = 1/(2L).
  GridSpec dual() const;
  /// Cell volume h^n.
  double cell_volume() const;

  bool operator==(const GridSpec& other) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int dim_;
  double half_width_;
  double step_;
  int n_axis_;
  std::size_t size_;
};

enum class AlgebraKind { Scalar, Clifford, Torus, Matrix };

/// Algebra-valued grid function. Each point stores `width` complex components
/// of one coefficient algebra (a Clifford multivector, the Fourier modes of a
/// torus element, a flattened square matrix).
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::size_t width = 1, AlgebraKind kind = AlgebraKind::Scalar);

  using Sampler = std::function<void(std::span<const double> x, std::span<cplx> out)>;
  static GridFunction sample(const GridSpec& spec, std::size_t width, AlgebraKind kind,
                             const Sampler& fn);
  static GridFunction sample_scalar(const GridSpec& spec,
                                    const std::function<cplx(std::span<const double>)>& fn);

  const GridSpec& spec() const { return spec_; }
  std::size_t width() const { return width_; }
  AlgebraKind kind() const { return kind_; }

  cplx& at(std::size_t point, std::size_t component = 0) {
    return values_[point * width_ + component];
  }
  cplx at(std::size_t point, std::size_t component = 0) const {
    return values_[point * width_ + component];
  }
  std::span<cplx> value(std::size_t point) { return {values_.data() + point * width_, width_}; }
  std::span<const cplx> value(std::size_t point) const {
    return {values_.data() + point * width_, width_};
  }
  std::vector<cplx>& data() { return values_; }
  const std::vector<cplx>& data() const { return values_; }

  /// Euclidean norm of the components at one point.
  double point_norm(std::size_t point) const;
  double sup_norm() const;
  /// True when no value is NaN or infinite.
  bool finite() const;

  /// One component as a scalar grid function.
  GridFunction component(std::size_t c) const;

 private:
  GridSpec spec_;
  std::size_t width_;
  AlgebraKind kind_;
  std::vector<cplx> values_;
};

/// sup_x (1 + |x|)^i || Delta^j f(x) || with Delta^j the composite central
/// difference (f(x+h) - f(x-h))/(2h) applied j_a times along axis a. Points
/// whose stencil leaves the box are skipped. Throws std::invalid_argument if
/// no point admits the stencil.
double seminorm(const GridFunction& f, int weight_order, std::span<const int> multi_index);

struct DecayShell {
  double radius = 0.0;
  double value = 0.0;         // shell sup of the pointwise norm
  double fit_residual = 0.0;  // log(value) minus the fitted line; 0 if unused
};

struct DecayReport {
  double order = 0.0;          // negated least-squares slope; +inf if unmeasurable
  bool exceeds_range = false;  // tail fell below the noise floor before 3 shells
  double rms_residual = 0.0;
  std::size_t fitted_shells = 0;
  std::vector<DecayShell> shells;
};

/// Fits log ||f|| against log |x| over radial shells of width h in [r_min,
/// r_max]. Shells from the first one at or below `noise_floor` onward are
/// excluded. Throws std::invalid_argument when the window holds fewer than 6
/// shells or leaves the grid.
DecayReport decay_order(const GridFunction& f, double r_min, double r_max,
                        double noise_floor = std::numeric_limits<double>::min());

/// Writes radius,value,fit_residual rows.
std::string decay_csv(const DecayReport& report);

enum class FourierSign {
  Forward,  // integral f(x) e(-<x, xi>) dx
  Inverse,  // integral f(xi) e(+<x, xi>) dxi
};

/// Discrete transform onto spec().dual() with the 2 pi-in-exponent convention
/// and the self-dual measure; fourier(fourier(f, Forward), Inverse) == f.
GridFunction fourier(const GridFunction& f, FourierSign sign);

/// Zero-padded linear convolution h^n sum_y a(y) b(x - y) evaluated on the
/// grid of a; samples of b outside the box count as zero. Componentwise when
/// both have the same width.
GridFunction convolve(const GridFunction& a, const GridFunction& b);

// ---------------------------------------------------------------------------
// Regularized oscillatory integrals.

enum class Extrapolation {
  Value,  // Richardson on the regularized values
  Log,    // Richardson on log(value) with unwrapped phase
};

struct QuadratureSpec {
  std::vector<double> epsilon_sequence{0.2, 0.1, 0.05};
  int richardson_order = 2;
  Extrapolation mode = Extrapolation::Value;
  /// Midpoint nodes for integrals over the support of chi_hat.
  int s_nodes = 2048;

  /// Throws std::invalid_argument unless the sequence is strictly decreasing
  /// inside (0, 1] and long enough for the Richardson order.
  void validate() const;
};

struct OscResult {
  std::vector<cplx> value;
  double error_estimate = 0.0;  // spread of the last tableau row
  bool converged = true;        // false when the spread grows with the level
  std::vector<std::vector<cplx>> regularized;  // one entry per epsilon
};

/// Neville extrapolation of vector data v(eps) to eps = 0.
OscResult richardson_extrapolate(std::span<const double> eps,
                                 const std::vector<std::vector<cplx>>& values, int order,
                                 Extrapolation mode);

/// Evaluates the regularized integral at each epsilon and extrapolates.
using RegularizedIntegral = std::function<std::vector<cplx>(double epsilon)>;
OscResult osc_integral(const RegularizedIntegral& at_epsilon, const QuadratureSpec& quad);

/// Phase-amplitude data on a grid over R^d: integrand amplitude(z) e(phase(z)).
struct OscIntegrand {
  GridSpec spec;
  std::size_t width = 1;
  std::vector<cplx> amplitude;  // width values per point
  std::vector<double> phase;    // one value per point, in cycles
};

/// Trapezoidal evaluation with weight exp(-pi eps |z|^2), then extrapolation.
OscResult osc_integral(const OscIntegrand& integrand, const QuadratureSpec& quad);

}  // namespace nct
