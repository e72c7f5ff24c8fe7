#include "nct/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nct/parallel.hpp"

namespace nct {

cplx e_phase(double s) {
  const double t = s - std::round(s);
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

GridSpec::GridSpec(int dim, double half_width, double step)
    : dim_(dim), half_width_(half_width), step_(step) {
  if (dim < 1 || dim > 6) throw std::invalid_argument("GridSpec: dimension must be in [1, 6]");
  if (!(half_width > 0.0) || !(step > 0.0))
    throw std::invalid_argument("GridSpec: half_width and step must be positive");
  const double ratio = 2.0 * half_width / step;
  const double rounded = std::round(ratio);
  if (rounded < 2.0 || std::abs(ratio - rounded) > 1e-9 * rounded)
    throw std::invalid_argument("GridSpec: 2L/h must be a positive integer");
  n_axis_ = static_cast<int>(rounded);
  if (n_axis_ % 2 != 0) throw std::invalid_argument("GridSpec: 2L/h must be even");
  double total = std::pow(static_cast<double>(n_axis_), dim);
  if (total > 1e9) throw std::invalid_argument("GridSpec: grid too large");
  size_ = static_cast<std::size_t>(total);
}

void GridSpec::unflatten(std::size_t flat, std::span<int> index) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    index[a] = static_cast<int>(flat % n_axis_);
    flat /= n_axis_;
  }
}

std::size_t GridSpec::flatten(std::span<const int> index) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_axis_ + static_cast<std::size_t>(index[a]);
  return flat;
}

void GridSpec::point(std::size_t flat, std::span<double> x) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = coord(static_cast<int>(flat % n_axis_));
    flat /= n_axis_;
  }
}

double GridSpec::radius(std::size_t flat) const {
  double s = 0.0;
  for (int a = dim_ - 1; a >= 0; --a) {
    const double c = coord(static_cast<int>(flat % n_axis_));
    s += c * c;
    flat /= n_axis_;
  }
  return std::sqrt(s);
}

std::size_t GridSpec::locate(std::span<const int> index) const {
  for (int a = 0; a < dim_; ++a)
    if (index[a] < 0 || index[a] >= n_axis_) return npos;
  return flatten(index);
}

GridSpec GridSpec::dual() const {
  return GridSpec(dim_, 1.0 / (2.0 * step_), 1.0 / (2.0 * half_width_));
}

double GridSpec::cell_volume() const { return std::pow(step_, dim_); }

bool GridSpec::operator==(const GridSpec& other) const {
  return dim_ == other.dim_ && n_axis_ == other.n_axis_ &&
         std::abs(step_ - other.step_) <= 1e-12 * step_ &&
         std::abs(half_width_ - other.half_width_) <= 1e-12 * half_width_;
}

GridFunction::GridFunction(GridSpec spec, std::size_t width, AlgebraKind kind)
    : spec_(spec), width_(width), kind_(kind) {
  if (width == 0) throw std::invalid_argument("GridFunction: zero width");
  values_.assign(spec_.size() * width_, cplx{});
}

GridFunction GridFunction::sample(const GridSpec& spec, std::size_t width, AlgebraKind kind,
                                  const Sampler& fn) {
  GridFunction out(spec, width, kind);
  parallel_for(spec.size(), [&](std::size_t p) {
    std::vector<double> x(spec.dim());
    spec.point(p, x);
    fn(x, out.value(p));
  });
  return out;
}

GridFunction GridFunction::sample_scalar(const GridSpec& spec,
                                         const std::function<cplx(std::span<const double>)>& fn) {
  return sample(spec, 1, AlgebraKind::Scalar,
                [&](std::span<const double> x, std::span<cplx> out) { out[0] = fn(x); });
}

double GridFunction::point_norm(std::size_t point) const {
  double s = 0.0;
  for (const auto& v : value(point)) s += std::norm(v);
  return std::sqrt(s);
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (std::size_t p = 0; p < spec_.size(); ++p) m = std::max(m, point_norm(p));
  return m;
}

bool GridFunction::finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

GridFunction GridFunction::component(std::size_t c) const {
  if (c >= width_) throw std::out_of_range("GridFunction::component");
  GridFunction out(spec_, 1, AlgebraKind::Scalar);
  for (std::size_t p = 0; p < spec_.size(); ++p) out.at(p) = at(p, c);
  return out;
}

namespace {

// coefficients of ((S - S^{-1}) / 2h)^k at offsets -k..k
std::vector<double> central_stencil(int k, double h) {
  std::vector<double> c(2 * k + 1, 0.0);
  double binom = 1.0;
  const double scale = std::pow(2.0 * h, -k);
  for (int l = 0; l <= k; ++l) {
    c[(k - 2 * l) + k] += ((l % 2 == 0) ? 1.0 : -1.0) * binom * scale;
    binom = binom * (k - l) / (l + 1);
  }
  return c;
}

}  // namespace

double seminorm(const GridFunction& f, int weight_order, std::span<const int> multi_index) {
  const GridSpec& spec = f.spec();
  const int n = spec.dim();
  if (static_cast<int>(multi_index.size()) != n)
    throw std::invalid_argument("seminorm: multi-index length must equal grid dimension");
  std::vector<std::vector<double>> stencils;
  for (int a = 0; a < n; ++a) {
    if (multi_index[a] < 0) throw std::invalid_argument("seminorm: negative multi-index");
    if (2 * multi_index[a] >= spec.points_per_axis())
      throw std::invalid_argument("seminorm: difference order too large for the grid");
    stencils.push_back(central_stencil(multi_index[a], spec.step()));
  }
  // tensor-product stencil as (offset vector, weight) pairs
  std::vector<std::pair<std::vector<int>, double>> taps{{std::vector<int>(n, 0), 1.0}};
  for (int a = 0; a < n; ++a) {
    std::vector<std::pair<std::vector<int>, double>> next;
    const int k = multi_index[a];
    for (const auto& [off, w] : taps)
      for (int o = -k; o <= k; ++o) {
        const double c = stencils[a][o + k];
        if (c == 0.0) continue;
        auto v = off;
        v[a] = o;
        next.emplace_back(std::move(v), w * c);
      }
    taps = std::move(next);
  }
  const std::size_t width = f.width();
  double best = -1.0;
  std::vector<int> idx(n), shifted(n);
  std::vector<cplx> acc(width);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.unflatten(p, idx);
    bool fits = true;
    for (int a = 0; a < n; ++a)
      if (idx[a] - multi_index[a] < 0 || idx[a] + multi_index[a] >= spec.points_per_axis())
        fits = false;
    if (!fits) continue;
    std::fill(acc.begin(), acc.end(), cplx{});
    for (const auto& [off, w] : taps) {
      for (int a = 0; a < n; ++a) shifted[a] = idx[a] + off[a];
      const auto v = f.value(spec.flatten(shifted));
      for (std::size_t c = 0; c < width; ++c) acc[c] += w * v[c];
    }
    double norm2 = 0.0;
    for (const auto& v : acc) norm2 += std::norm(v);
    const double val = std::pow(1.0 + spec.radius(p), weight_order) * std::sqrt(norm2);
    best = std::max(best, val);
  }
  if (best < 0.0) throw std::invalid_argument("seminorm: no grid point admits the stencil");
  return best;
}

DecayReport decay_order(const GridFunction& f, double r_min, double r_max, double noise_floor) {
  const GridSpec& spec = f.spec();
  const double h = spec.step();
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw std::invalid_argument("decay_order: window must satisfy 0 < r_min < r_max");
  if (r_max > spec.half_width() + 1e-12)
    throw std::invalid_argument("decay_order: window leaves the grid");
  const int shells = static_cast<int>(std::floor((r_max - r_min) / h + 1e-9));
  if (shells < 6) throw std::invalid_argument("decay_order: window holds fewer than 6 shells");

  std::vector<double> sup(shells, -1.0);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const double r = spec.radius(p);
    if (r < r_min || r >= r_min + shells * h) continue;
    const int k = std::min(shells - 1, static_cast<int>((r - r_min) / h));
    sup[k] = std::max(sup[k], f.point_norm(p));
  }

  DecayReport report;
  std::vector<double> lx, ly;
  std::vector<std::size_t> used;
  bool floor_hit = false;
  for (int k = 0; k < shells; ++k) {
    if (sup[k] < 0.0) continue;  // no sample in this shell
    DecayShell s;
    s.radius = r_min + (k + 0.5) * h;
    s.value = sup[k];
    report.shells.push_back(s);
    if (floor_hit || !(sup[k] > noise_floor)) {
      floor_hit = true;
      continue;
    }
    lx.push_back(std::log(s.radius));
    ly.push_back(std::log(s.value));
    used.push_back(report.shells.size() - 1);
  }
  report.fitted_shells = lx.size();
  if (lx.size() < 3) {
    report.exceeds_range = true;
    report.order = std::numeric_limits<double>::infinity();
    return report;
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double res = ly[i] - (my + slope * (lx[i] - mx));
    report.shells[used[i]].fit_residual = res;
    rss += res * res;
  }
  report.order = -slope;
  report.rms_residual = std::sqrt(rss / m);
  return report;
}

std::string decay_csv(const DecayReport& report) {
  std::string out = "radius,value,fit_residual\n";
  char buf[128];
  for (const auto& s : report.shells) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", s.radius, s.value, s.fit_residual);
    out += buf;
  }
  return out;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GridFunction fourier(const GridFunction& f, FourierSign sign) {
  const GridSpec& spec = f.spec();
  const GridSpec target = spec.dual();
  const int n = spec.dim();
  const int N = spec.points_per_axis();
  const std::size_t width = f.width();
  const std::size_t total = spec.size();

  // x_j = -L + j h on both grids turns the centered transform into a DFT
  // between (-1)^j-modulated sequences with a global (-1)^{N/2} per axis.
  auto parity = [&](std::size_t p) {
    int s = 0;
    for (int a = 0; a < n; ++a) {
      s += static_cast<int>(p % N);
      p /= N;
    }
    return (s % 2 == 0) ? 1.0 : -1.0;
  };
  const double global = ((N / 2) * n) % 2 == 0 ? 1.0 : -1.0;
  const double measure = spec.cell_volume();

  fftw_complex* buf = fftw_alloc_complex(total * width);
  for (std::size_t p = 0; p < total; ++p) {
    const double s = parity(p);
    for (std::size_t c = 0; c < width; ++c) {
      const cplx v = s * f.at(p, c);
      buf[p * width + c][0] = v.real();
      buf[p * width + c][1] = v.imag();
    }
  }
  std::vector<int> dims(n, N);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(n, dims.data(), static_cast<int>(width), buf, nullptr,
                              static_cast<int>(width), 1, buf, nullptr, static_cast<int>(width), 1,
                              sign == FourierSign::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  GridFunction out(target, width, f.kind());
  for (std::size_t p = 0; p < total; ++p) {
    const double s = global * parity(p) * measure;
    for (std::size_t c = 0; c < width; ++c)
      out.at(p, c) = s * cplx(buf[p * width + c][0], buf[p * width + c][1]);
  }
  fftw_free(buf);
  return out;
}

GridFunction convolve(const GridFunction& a, const GridFunction& b) {
  const GridSpec& spec = a.spec();
  if (!(b.spec() == spec)) throw std::invalid_argument("convolve: grid mismatch");
  if (b.width() != a.width() && b.width() != 1)
    throw std::invalid_argument("convolve: width mismatch");
  const int n = spec.dim();
  const int N = spec.points_per_axis();
  const int P = 2 * N;
  std::size_t padded = 1;
  for (int d = 0; d < n; ++d) padded *= P;
  std::vector<int> dims(n, P), idx(n), pidx(n);

  auto pad_index = [&](std::span<const int> i) {
    std::size_t flat = 0;
    for (int d = 0; d < n; ++d) flat = flat * P + static_cast<std::size_t>(i[d]);
    return flat;
  };

  fftw_complex* fa = fftw_alloc_complex(padded);
  fftw_complex* fb = fftw_alloc_complex(padded);
  fftw_plan pa, pb, back;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    pa = fftw_plan_dft(n, dims.data(), fa, fa, FFTW_FORWARD, FFTW_ESTIMATE);
    pb = fftw_plan_dft(n, dims.data(), fb, fb, FFTW_FORWARD, FFTW_ESTIMATE);
    back = fftw_plan_dft(n, dims.data(), fa, fa, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  GridFunction out(spec, a.width(), a.kind());
  const double scale = spec.cell_volume() / static_cast<double>(padded);
  for (std::size_t c = 0; c < a.width(); ++c) {
    std::fill(fa[0], fa[0] + 2 * padded, 0.0);
    std::fill(fb[0], fb[0] + 2 * padded, 0.0);
    const std::size_t cb = (b.width() == 1) ? 0 : c;
    for (std::size_t p = 0; p < spec.size(); ++p) {
      spec.unflatten(p, idx);
      const std::size_t q = pad_index(idx);
      fa[q][0] = a.at(p, c).real();
      fa[q][1] = a.at(p, c).imag();
      fb[q][0] = b.at(p, cb).real();
      fb[q][1] = b.at(p, cb).imag();
    }
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t q = 0; q < padded; ++q) {
      const cplx v = cplx(fa[q][0], fa[q][1]) * cplx(fb[q][0], fb[q][1]);
      fa[q][0] = v.real();
      fa[q][1] = v.imag();
    }
    fftw_execute(back);
    // x_i - y_j sits at index i - j + N/2, so output i reads the sum at i + N/2
    for (std::size_t p = 0; p < spec.size(); ++p) {
      spec.unflatten(p, idx);
      for (int d = 0; d < n; ++d) pidx[d] = idx[d] + N / 2;
      const std::size_t q = pad_index(pidx);
      out.at(p, c) = scale * cplx(fa[q][0], fa[q][1]);
    }
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(back);
  }
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

void QuadratureSpec::validate() const {
  if (epsilon_sequence.size() < 2)
    throw std::invalid_argument("QuadratureSpec: epsilon_sequence needs at least 2 entries");
  for (std::size_t i = 0; i < epsilon_sequence.size(); ++i) {
    const double e = epsilon_sequence[i];
    if (!(e > 0.0 && e <= 1.0))
      throw std::invalid_argument("QuadratureSpec: epsilon values must lie in (0, 1]");
    if (i > 0 && !(e < epsilon_sequence[i - 1]))
      throw std::invalid_argument("QuadratureSpec: epsilon_sequence must strictly decrease");
  }
  if (richardson_order < 1)
    throw std::invalid_argument("QuadratureSpec: richardson_order must be >= 1");
  if (s_nodes < 2 || s_nodes % 2 != 0)
    throw std::invalid_argument("QuadratureSpec: s_nodes must be a positive even integer");
}

OscResult richardson_extrapolate(std::span<const double> eps,
                                 const std::vector<std::vector<cplx>>& values, int order,
                                 Extrapolation mode) {
  if (eps.size() != values.size() || eps.size() < 2)
    throw std::invalid_argument("richardson_extrapolate: need matching data for >= 2 epsilons");
  const std::size_t rows = eps.size();
  const std::size_t width = values.front().size();
  const int p = std::min<int>(order, static_cast<int>(rows) - 1);

  OscResult result;
  result.regularized = values;
  result.value.assign(width, cplx{});
  double spread = 0.0, prev_spread = 0.0, scale = 0.0;
  bool degenerate = false;

  for (std::size_t c = 0; c < width; ++c) {
    std::vector<cplx> col(rows);
    for (std::size_t i = 0; i < rows; ++i) col[i] = values[i][c];
    if (mode == Extrapolation::Log) {
      double unwrap = 0.0, last = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (std::abs(col[i]) == 0.0) degenerate = true;
        double arg = std::arg(col[i]);
        if (i > 0) {
          while (arg + unwrap - last > std::numbers::pi) unwrap -= 2.0 * std::numbers::pi;
          while (arg + unwrap - last < -std::numbers::pi) unwrap += 2.0 * std::numbers::pi;
        }
        last = arg + unwrap;
        col[i] = cplx(std::log(std::abs(col[i])), last);
      }
      if (degenerate) break;
    }
    std::vector<std::vector<cplx>> t(rows, std::vector<cplx>(p + 1));
    for (std::size_t i = 0; i < rows; ++i) t[i][0] = col[i];
    for (int j = 1; j <= p; ++j)
      for (std::size_t i = j; i < rows; ++i)
        t[i][j] = (eps[i] * t[i - 1][j - 1] - eps[i - j] * t[i][j - 1]) / (eps[i] - eps[i - j]);
    const std::size_t last = rows - 1;
    cplx best = t[last][p];
    cplx lower = t[last][p - 1];
    cplx lower2 = (p >= 2) ? t[last][p - 2] : t[last - 1][0];
    cplx v = best, v1 = lower, v2 = lower2;
    if (mode == Extrapolation::Log) {
      v = std::exp(best);
      v1 = std::exp(lower);
      v2 = std::exp(lower2);
    }
    result.value[c] = v;
    spread = std::max(spread, std::abs(v - v1));
    prev_spread = std::max(prev_spread, std::abs(v1 - v2));
    scale = std::max(scale, std::abs(v));
  }
  if (degenerate) {
    result.converged = false;
    result.error_estimate = std::numeric_limits<double>::infinity();
    return result;
  }
  result.error_estimate = spread;
  result.converged = !(spread > 2.0 * prev_spread && spread > 1e-12 * std::max(1.0, scale));
  return result;
}

OscResult osc_integral(const RegularizedIntegral& at_epsilon, const QuadratureSpec& quad) {
  quad.validate();
  std::vector<std::vector<cplx>> values;
  for (double e : quad.epsilon_sequence) values.push_back(at_epsilon(e));
  for (const auto& v : values)
    if (v.size() != values.front().size())
      throw std::invalid_argument("osc_integral: inconsistent value widths");
  return richardson_extrapolate(quad.epsilon_sequence, values, quad.richardson_order, quad.mode);
}

OscResult osc_integral(const OscIntegrand& integrand, const QuadratureSpec& quad) {
  const GridSpec& spec = integrand.spec;
  const std::size_t width = integrand.width;
  if (integrand.amplitude.size() != spec.size() * width || integrand.phase.size() != spec.size())
    throw std::invalid_argument("osc_integral: sample arrays do not match the grid");
  std::vector<double> r2(spec.size());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const double r = spec.radius(p);
    r2[p] = r * r;
  }
  std::vector<cplx> phases(spec.size());
  for (std::size_t p = 0; p < spec.size(); ++p) phases[p] = e_phase(integrand.phase[p]);
  const double vol = spec.cell_volume();
  return osc_integral(
      [&](double eps) {
        std::vector<cplx> out(width);
        std::vector<cplx> terms(spec.size());
        for (std::size_t c = 0; c < width; ++c) {
          for (std::size_t p = 0; p < spec.size(); ++p)
            terms[p] = integrand.amplitude[p * width + c] * phases[p] *
                       std::exp(-std::numbers::pi * eps * r2[p]);
          out[c] = pairwise_sum(std::span<const cplx>(terms)) * vol;
        }
        return out;
      },
      quad);
}

}  // namespace nct
