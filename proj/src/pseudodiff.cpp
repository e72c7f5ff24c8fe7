#include "nct/pseudodiff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "nct/parallel.hpp"

namespace nct {

namespace {

constexpr double kPi = std::numbers::pi;

double euclid(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// h'(y)/y with h(y) = sin(y)/y
double q_ratio(double y) {
  const double y2 = y * y;
  if (std::abs(y) < 0.1) return -1.0 / 3.0 + y2 / 30.0 - y2 * y2 / 840.0 + y2 * y2 * y2 / 45360.0;
  return (y * std::cos(y) - std::sin(y)) / (y2 * y);
}

struct HalfNodes {
  double ds;
  std::vector<double> s;
  std::vector<double> w;  // 2 g(s) ds
};

HalfNodes half_nodes(const NormalizingFunction& chi, int s_nodes, double r, const char* who) {
  if (s_nodes < 2 || s_nodes % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": s_nodes must be a positive even integer");
  HalfNodes hn;
  const int half = s_nodes / 2;
  hn.ds = chi.sigma() / half;
  if (hn.ds * r > kPi / 4.0)
    throw std::domain_error(std::string(who) + ": s-step cannot resolve |xi| = " + std::to_string(r));
  for (int k = 0; k < half; ++k) {
    const double s = (k + 0.5) * hn.ds;
    hn.s.push_back(s);
    hn.w.push_back(2.0 * chi.profile(s) * hn.ds);
  }
  return hn;
}

Eigen::MatrixXd to_double(const IntMatrix2& g) { return g.cast<double>(); }

}  // namespace

// ---------------------------------------------------------------------------
// Normalizing function.

NormalizingFunction::NormalizingFunction(double sigma, int nodes) : sigma_(sigma), nodes_(nodes) {
  if (!(sigma > 0.0)) throw std::invalid_argument("NormalizingFunction: sigma must be positive");
  if (nodes < 16) throw std::invalid_argument("NormalizingFunction: too few nodes");
  const double ds = sigma / nodes;
  for (int k = 0; k < nodes; ++k) {
    const double s = (k + 0.5) * ds;
    s_.push_back(s);
    w_.push_back(2.0 * profile(s) * ds);
  }
}

double NormalizingFunction::profile(double s) const {
  const double u = s / sigma_;
  if (std::abs(u) >= 1.0) return 0.0;
  const double t = tau();
  return std::exp(-s * s / (2.0 * t * t) + 1.0 - 1.0 / (1.0 - u * u)) / kPi;
}

cplx NormalizingFunction::chi_hat(double s) const {
  if (s == 0.0) return 0.0;
  return cplx(0.0, -profile(s) / s);
}

double NormalizingFunction::value(double lambda) const {
  if (lambda == 0.0) return 0.0;
  const double a = std::abs(lambda);
  double acc = 0.0;
  for (std::size_t k = 0; k < s_.size(); ++k) acc += w_[k] * std::sin(a * s_[k]) / s_[k];
  return lambda < 0.0 ? -acc : acc;
}

double NormalizingFunction::derivative(double lambda, int order) const {
  if (order < 0) throw std::invalid_argument("NormalizingFunction::derivative: negative order");
  if (order == 0) return value(lambda);
  const double shift = order * kPi / 2.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < s_.size(); ++k)
    acc += w_[k] * std::pow(s_[k], order - 1) * std::sin(lambda * s_[k] + shift);
  return acc;
}

NormalizingFunction build_chi(double sigma, double lambda_test, int nodes) {
  NormalizingFunction chi(sigma, nodes);
  if (std::abs(kPi * chi.profile(0.0) - 1.0) > 1e-14)
    throw std::domain_error("build_chi: Dirichlet limit pi g(0) differs from 1");
  const int samples = std::max(100, static_cast<int>(lambda_test * 100.0));
  for (int i = 1; i <= samples; ++i) {
    const double lambda = lambda_test * i / samples;
    const double v = chi.value(lambda);
    if (!(v > 0.0))
      throw std::domain_error("build_chi: chi not positive at lambda = " + std::to_string(lambda));
    if (v > 1.0 + 1e-12)
      throw std::domain_error("build_chi: |chi| exceeds 1 at lambda = " + std::to_string(lambda));
    if (chi.value(-lambda) != -v) throw std::domain_error("build_chi: chi not odd");
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Sigma and its derivatives.

CliffordSymbol sigma_symbol(const NormalizingFunction& chi, int n, const QuadratureSpec& quad) {
  if (n < 1) throw std::invalid_argument("sigma_symbol: n must be positive");
  CliffordSymbol out;
  out.order = 0.0;
  out.n = n;
  out.eval = [chi, quad](std::span<const double> xi) { return chi_of_clifford(chi, xi, quad); };
  return out;
}

CliffordSymbol sigma_symbol(const NormalizingFunction& chi, const Eigen::MatrixXd& Q,
                            const QuadratureSpec& quad) {
  if (Q.rows() != Q.cols() || Q.rows() < 1) throw std::invalid_argument("sigma_symbol: Q not square");
  CliffordSymbol out;
  out.order = 0.0;
  out.n = static_cast<int>(Q.rows());
  out.eval = [chi, Q, quad](std::span<const double> xi) {
    if (static_cast<Eigen::Index>(xi.size()) != Q.rows())
      throw std::invalid_argument("sigma_symbol: dimension mismatch");
    Eigen::VectorXd v = Q * Eigen::Map<const Eigen::VectorXd>(xi.data(), Q.rows());
    return chi_of_clifford(chi, std::span<const double>(v.data(), v.size()), quad);
  };
  return out;
}

CliffordElement sigma_closed_form(const NormalizingFunction& chi, std::span<const double> xi) {
  const double r = euclid(xi);
  CliffordElement out = clifford_vector(xi);
  if (r == 0.0) return out;
  out *= chi.value(r) / r;
  return out;
}

CliffordElement sigma_derivative(const NormalizingFunction& chi, std::span<const double> xi, int axis,
                                 const QuadratureSpec& quad) {
  const int n = static_cast<int>(xi.size());
  if (axis < 0 || axis >= n) throw std::invalid_argument("sigma_derivative: axis out of range");
  const double r = euclid(xi);
  const HalfNodes hn = half_nodes(chi, quad.s_nodes, r, "sigma_derivative");
  double a = 0.0, b = 0.0;  // int g H ds and int g s^2 q(s r) ds
  for (std::size_t k = 0; k < hn.s.size(); ++k) {
    const double s = hn.s[k], y = s * r;
    const double H = (y == 0.0) ? 1.0 : std::sin(y) / y;
    a += hn.w[k] * H;
    b += hn.w[k] * s * s * q_ratio(y);
  }
  CliffordElement out = clifford_vector(xi);
  out *= b * xi[axis];
  out[1u << axis] += a;
  return out;
}

DecayReport symbol_derivative_decay(const NormalizingFunction& chi, const GridSpec& grid, int axis,
                                    double r_min, double r_max, const QuadratureSpec& quad) {
  const int n = grid.dim();
  const std::size_t width = std::size_t{1} << n;
  auto f = GridFunction::sample(grid, width, AlgebraKind::Clifford,
                                [&](std::span<const double> xi, std::span<cplx> out) {
                                  const auto d = sigma_derivative(chi, xi, axis, quad);
                                  std::copy(d.coeffs().begin(), d.coeffs().end(), out.begin());
                                });
  return decay_order(f, r_min, r_max, 1e-12 * f.sup_norm());
}

double boundedness_probe(const NormalizingFunction& chi, double r, int l, std::span<const int> J,
                         const QuadratureSpec& quad) {
  int total = 0;
  for (int v : J) {
    if (v < 0) throw std::invalid_argument("boundedness_probe: negative multi-index");
    total += v;
  }
  if (total > 2) throw std::invalid_argument("boundedness_probe: |J| <= 2 supported");
  if (!(r > 0.0)) throw std::invalid_argument("boundedness_probe: r must be positive");
  // derivatives of H(s, xi) = h(s|xi|) at xi = r e_1
  int kind = 0;  // 0: h, 1: s h', 2: s^2 h'', 3: s h'/r, 4: zero
  if (total == 0) {
    kind = 0;
  } else if (J[0] == total) {
    kind = total;
  } else if (total == 2) {
    kind = 4;
    for (std::size_t i = 1; i < J.size(); ++i)
      if (J[i] == 2) kind = 3;
  } else {
    kind = 4;
  }
  if (kind == 4) return 0.0;
  const HalfNodes hn = half_nodes(chi, quad.s_nodes, r, "boundedness_probe");
  double acc = 0.0;
  for (std::size_t k = 0; k < hn.s.size(); ++k) {
    const double s = hn.s[k], y = s * r;
    double v = 0.0;
    switch (kind) {
      case 0: v = h_derivative(0, y); break;
      case 1: v = s * h_derivative(1, y); break;
      case 2: v = s * s * h_derivative(2, y); break;
      default: v = s * h_derivative(1, y) / r; break;
    }
    acc += hn.w[k] * v;
  }
  return std::pow(r, l) * acc;
}

// ---------------------------------------------------------------------------
// Dirac kernels.

namespace {

// Vector coefficient v(q) of Sigma(xi) = v c(xi) for every integer q = |j - c|^2
// occurring on a cubic grid, so Sigma is evaluated once per radius.
std::unordered_map<long, double> radial_sigma_table(const NormalizingFunction& chi, const GridSpec& xi_grid,
                                                    const QuadratureSpec& quad) {
  const int n = xi_grid.dim();
  const int N = xi_grid.points_per_axis();
  std::set<long> qs;
  std::vector<int> idx(n);
  for (std::size_t p = 0; p < xi_grid.size(); ++p) {
    xi_grid.unflatten(p, idx);
    long q = 0;
    for (int a = 0; a < n; ++a) q += static_cast<long>(idx[a] - N / 2) * (idx[a] - N / 2);
    qs.insert(q);
  }
  std::vector<long> keys(qs.begin(), qs.end());
  std::vector<double> vals(keys.size(), 0.0);
  const double h = xi_grid.step();
  parallel_for(keys.size(), [&](std::size_t i) {
    if (keys[i] == 0) return;
    const double r = h * std::sqrt(static_cast<double>(keys[i]));
    std::vector<double> xi(n, 0.0);
    xi[0] = r;
    vals[i] = chi_of_clifford(chi, xi, quad)[1].real() / r;
  });
  std::unordered_map<long, double> table;
  for (std::size_t i = 0; i < keys.size(); ++i) table.emplace(keys[i], vals[i]);
  return table;
}

long radial_key(const GridSpec& spec, std::size_t p, std::vector<int>& idx) {
  spec.unflatten(p, idx);
  const int N = spec.points_per_axis();
  long q = 0;
  for (int i : idx) q += static_cast<long>(i - N / 2) * (i - N / 2);
  return q;
}

ModeBasis support_basis(const TorusElement& a) {
  std::vector<Mode> modes;
  for (const auto& [m, v] : a.coeffs()) modes.push_back(m);
  if (modes.empty()) return ModeBasis::scalar(a.dim());
  return ModeBasis(modes);
}

GridSpec kernel_xi_grid(const KernelGrid& grid, int n) {
  return GridSpec(n, grid.xi_half_width, 1.0 / (2.0 * grid.x_half_width));
}

}  // namespace

DiracKernel dirac_commutator_kernel(const TorusElement& a, const NormalizingFunction& chi,
                                    const KernelGrid& grid, const QuadratureSpec& quad) {
  const int n = a.dim();
  const GridSpec xi_grid = kernel_xi_grid(grid, n);
  const auto table = radial_sigma_table(chi, xi_grid, quad);

  // Sigma_hat as n vector-blade components, regularized by exp(-pi eps |xi|^2)
  auto at_epsilon = [&](double eps) {
    GridFunction f(xi_grid, n, AlgebraKind::Clifford);
    parallel_for(xi_grid.size(), [&](std::size_t p) {
      std::vector<int> idx(n);
      std::vector<double> xi(n);
      const double v = table.at(radial_key(xi_grid, p, idx));
      xi_grid.point(p, xi);
      double r2 = 0.0;
      for (double x : xi) r2 += x * x;
      const double damp = std::exp(-kPi * eps * r2);
      for (int b = 0; b < n; ++b) f.at(p, b) = v * xi[b] * damp;
    });
    return fourier(f, FourierSign::Forward).data();
  };
  OscResult hat = osc_integral(at_epsilon, quad);

  const GridSpec x_grid = xi_grid.dual();
  const ModeBasis modes = support_basis(a);
  const std::size_t M = modes.size();
  const std::size_t blades = std::size_t{1} << n;
  GridFunction kernel(x_grid, blades * M, AlgebraKind::Torus);
  parallel_for(x_grid.size(), [&](std::size_t p) {
    std::vector<double> x(n);
    x_grid.point(p, x);
    for (std::size_t i = 0; i < M; ++i) {
      const Mode& m = modes[i];
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += x[k] * m[k];
      const cplx factor = a.coeff(m) * (e_phase(-dot) - 1.0);
      for (int b = 0; b < n; ++b) kernel.at(p, (std::size_t{1} << b) * M + i) = hat.value[p * n + b] * factor;
    }
  });
  return DiracKernel{std::move(kernel), modes, hat.error_estimate, hat.converged};
}

DiracKernel dirac_defect_kernel(const TorusElement& a, const NormalizingFunction& chi,
                                const KernelGrid& grid, const QuadratureSpec& quad) {
  const int n = a.dim();
  const GridSpec xi_grid = kernel_xi_grid(grid, n);
  const auto table = radial_sigma_table(chi, xi_grid, quad);
  // 1 - Sigma^2 = 1 - v^2 |xi|^2 is integrable, so no regularizer is needed
  GridFunction f(xi_grid, 1, AlgebraKind::Scalar);
  parallel_for(xi_grid.size(), [&](std::size_t p) {
    std::vector<int> idx(n);
    const long q = radial_key(xi_grid, p, idx);
    const double v = table.at(q);
    const double r2 = xi_grid.step() * xi_grid.step() * static_cast<double>(q);
    f.at(p) = 1.0 - v * v * r2;
  });
  const GridFunction hat = fourier(f, FourierSign::Forward);
  const ModeBasis modes = support_basis(a);
  const std::size_t M = modes.size();
  GridFunction kernel(hat.spec(), M, AlgebraKind::Torus);
  for (std::size_t p = 0; p < hat.spec().size(); ++p)
    for (std::size_t i = 0; i < M; ++i) kernel.at(p, i) = hat.at(p) * a.coeff(modes[i]);
  return DiracKernel{std::move(kernel), modes, 0.0, true};
}

// ---------------------------------------------------------------------------
// G-invariance.

Eigen::MatrixXd dual_metric_factor(const CyclicAction& G) {
  const Eigen::Matrix2d Minv = G.gram().inverse();
  Eigen::LLT<Eigen::Matrix2d> llt(Minv);
  if (llt.info() != Eigen::Success) throw std::domain_error("dual_metric_factor: metric not positive");
  return Eigen::MatrixXd(llt.matrixL().transpose());
}

CliffordElement clifford_beta(const CyclicAction& G, int r, const CliffordElement& v) {
  const IntMatrix2 g = G.element(r);
  if (g == IntMatrix2::Identity()) return v;
  if (g == -IntMatrix2::Identity()) return v.grade_involution();
  const Eigen::MatrixXd Q = dual_metric_factor(G);
  const Eigen::MatrixXd O = Q * to_double(g).transpose() * Q.inverse();
  return orthogonal_action(O.transpose(), v);
}

namespace {

std::size_t wrapped_image(const GridSpec& spec, const IntMatrix2& A, std::size_t p) {
  std::array<int, 2> j{};
  spec.unflatten(p, j);
  const int N = spec.points_per_axis(), c = N / 2;
  std::array<int, 2> out{};
  for (int a = 0; a < 2; ++a) {
    long v = c;
    for (int b = 0; b < 2; ++b) v += static_cast<long>(A(a, b)) * (j[b] - c);
    v %= N;
    if (v < 0) v += N;
    out[a] = static_cast<int>(v);
  }
  return spec.flatten(out);
}

}  // namespace

InvarianceReport check_D_invariance(const NormalizingFunction& chi, const CyclicAction& G,
                                    std::span<const std::vector<double>> xi_samples,
                                    const QuadratureSpec& quad) {
  const Eigen::MatrixXd Q = dual_metric_factor(G);
  const CliffordSymbol sigma = sigma_symbol(chi, Q, quad);
  InvarianceReport rep;
  const int k = G.order();

  std::vector<CliffordElement> base;
  for (const auto& xi : xi_samples) {
    if (xi.size() != 2) throw std::invalid_argument("check_D_invariance: samples must be 2-dimensional");
    base.push_back(sigma.eval(xi));
  }
  for (int r = 0; r < k; ++r) {
    const IntMatrix2 g = G.element(r);
    double worst = 0.0;
    for (std::size_t i = 0; i < xi_samples.size(); ++i) {
      const auto& xi = xi_samples[i];
      const double moved[2] = {g(0, 0) * xi[0] + g(1, 0) * xi[1], g(0, 1) * xi[0] + g(1, 1) * xi[1]};
      const auto lhs = clifford_beta(G, r, sigma.eval(moved));
      worst = std::max(worst, (lhs - base[i]).norm());
    }
    rep.pointwise_defects.push_back(worst);
  }

  // transform side on a small grid; the regularizer uses the invariant metric
  const GridSpec xi_grid(2, 16.0, 0.25);
  std::vector<CliffordElement> sig;
  sig.reserve(xi_grid.size());
  for (std::size_t p = 0; p < xi_grid.size(); ++p) {
    double xi[2];
    xi_grid.point(p, xi);
    sig.push_back(sigma.eval(xi));
  }
  rep.transform_defects.assign(k, 0.0);
  for (double eps : quad.epsilon_sequence) {
    GridFunction f(xi_grid, 4, AlgebraKind::Clifford);
    for (std::size_t p = 0; p < xi_grid.size(); ++p) {
      double xi[2];
      xi_grid.point(p, xi);
      const Eigen::Vector2d v = Q * Eigen::Vector2d(xi[0], xi[1]);
      const double damp = std::exp(-kPi * eps * v.squaredNorm());
      for (unsigned b = 0; b < 4; ++b) f.at(p, b) = sig[p][b] * damp;
    }
    const GridFunction hat = fourier(f, FourierSign::Forward);
    const double scale = std::max(hat.sup_norm(), 1e-300);
    const GridSpec& xs = hat.spec();
    for (int r = 0; r < k; ++r) {
      const IntMatrix2 g = G.element(r);
      double worst = 0.0;
      for (std::size_t p = 0; p < xs.size(); ++p) {
        CliffordElement at_x(2);
        for (unsigned b = 0; b < 4; ++b) at_x[b] = hat.at(p, b);
        const auto rhs = clifford_beta(G, r, at_x);
        const std::size_t gp = wrapped_image(xs, g, p);
        double d = 0.0;
        for (unsigned b = 0; b < 4; ++b) d += std::norm(hat.at(gp, b) - rhs[b]);
        worst = std::max(worst, std::sqrt(d) / scale);
      }
      rep.transform_defects[r] = std::max(rep.transform_defects[r], worst);
    }
  }
  for (double d : rep.pointwise_defects) rep.max_defect = std::max(rep.max_defect, d);
  for (double d : rep.transform_defects) rep.max_defect = std::max(rep.max_defect, d);
  return rep;
}

// ---------------------------------------------------------------------------
// D_rho and the symbol calculus.

RnCrossedElement apply_D(const TorusSymbol& rho, const RnCrossedElement& u) {
  const GridSpec& spec = u.spec();
  const int n = spec.dim();
  if (rho.n != n) throw std::invalid_argument("apply_D: symbol dimension mismatch");
  const ModeBasis& basis = u.modes();
  const double c = u.action().factor();
  const GridFunction uhat = fourier(u.data(), FourierSign::Forward);
  const GridSpec& dual = uhat.spec();

  std::vector<TorusElement> rv(dual.size());
  parallel_for(dual.size(), [&](std::size_t p) {
    std::vector<double> xi(n);
    dual.point(p, xi);
    for (double& v : xi) v = -v;
    rv[p] = rho.eval(xi);
  });
  std::set<Mode> rmodes;
  for (const auto& t : rv)
    for (const auto& [m, v] : t.coeffs()) rmodes.insert(m);

  struct Pair {
    Mode m;
    std::size_t n_idx;
    std::size_t p_idx;
  };
  std::vector<Pair> pairs;
  std::vector<std::string> warnings;
  for (const Mode& m : rmodes)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Mode p(n);
      for (int a = 0; a < n; ++a) p[a] = m[a] + basis[j][a];
      const std::size_t pi = basis.find(p);
      if (pi == ModeBasis::npos) {
        bool nonzero = false;
        for (std::size_t q = 0; q < dual.size() && !nonzero; ++q)
          nonzero = uhat.at(q, j) != 0.0 && rv[q].coeff(m) != 0.0;
        if (nonzero) warnings.push_back("apply_D: dropped product mode outside the basis");
        continue;
      }
      pairs.push_back({m, j, pi});
    }

  GridFunction prod(dual, std::max<std::size_t>(pairs.size(), 1), AlgebraKind::Torus);
  parallel_for(dual.size(), [&](std::size_t q) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      prod.at(q, i) = rv[q].coeff(pairs[i].m) * uhat.at(q, pairs[i].n_idx);
  });
  const GridFunction back = fourier(prod, FourierSign::Inverse);

  GridFunction out(spec, basis.size(), AlgebraKind::Torus);
  parallel_for(spec.size(), [&](std::size_t q) {
    std::vector<double> t(n);
    spec.point(q, t);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double dot = 0.0;
      for (int a = 0; a < n; ++a) dot += t[a] * pairs[i].m[a];
      out.at(q, pairs[i].p_idx) += e_phase(c * dot) * back.at(q, i);
    }
  });
  RnCrossedElement result(std::move(out), basis, u.action());
  result.warnings = u.warnings;
  if (!warnings.empty()) result.warnings.push_back(warnings.front());
  return result;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

TorusElement symbol_derivative(const TorusSymbol& rho, std::span<const double> xi, std::span<const int> k) {
  int total = 0;
  for (int v : k) total += v;
  if (total == 0) return rho.eval(xi);
  if (rho.deriv) return rho.deriv(xi, k);
  return detail::central_derivative<TorusElement>(rho.eval, xi, k, 1e-3);
}

// delta^k with delta_j = c * derivation_j
TorusElement scaled_derivation(std::span<const int> k, double c, const TorusElement& a) {
  int total = 0;
  for (int v : k) total += v;
  if (total == 0) return a;
  TorusElement out = derivation(k, a);
  out *= std::pow(c, total);
  return out;
}

}  // namespace

TorusSymbol symbol_compose(const TorusSymbol& rho1, const TorusSymbol& rho2, int N,
                           const ActionDescriptor& action) {
  if (rho1.n != rho2.n) throw std::invalid_argument("symbol_compose: dimension mismatch");
  if (N < 0 || N > 3) throw std::invalid_argument("symbol_compose: truncation order must be in [0, 3]");
  const int n = rho1.n;
  const double c = action.factor();
  const auto ks = detail::multi_indices_up_to(n, N);
  TorusSymbol out;
  out.order = rho1.order + rho2.order;
  out.n = n;
  out.eval = [rho1, rho2, ks, c, n](std::span<const double> xi) {
    const TorusElement b = rho2.eval(xi);
    TorusElement acc(n);
    for (const auto& k : ks) {
      int total = 0;
      double kfact = 1.0;
      for (int v : k) {
        total += v;
        kfact *= factorial(v);
      }
      if (total > 0 && c == 0.0) continue;
      const TorusElement db = scaled_derivation(k, c, b);
      if (db.pruned().empty()) continue;
      TorusElement term = star_0(symbol_derivative(rho1, xi, k), db);
      term *= std::pow(cplx(0.0, 2.0 * kPi), -total) / kfact;
      acc += term;
    }
    return acc;
  };
  return out;
}

TorusSymbol symbol_adjoint(const TorusSymbol& rho, int N, const ActionDescriptor& action) {
  if (N < 0 || N > 3) throw std::invalid_argument("symbol_adjoint: truncation order must be in [0, 3]");
  const int n = rho.n;
  const double c = action.factor();
  const auto ks = detail::multi_indices_up_to(n, N);
  TorusSymbol out;
  out.order = rho.order;
  out.n = n;
  out.eval = [rho, ks, c, n](std::span<const double> xi) {
    TorusElement acc(n);
    for (const auto& k : ks) {
      int total = 0;
      double kfact = 1.0;
      for (int v : k) {
        total += v;
        kfact *= factorial(v);
      }
      if (total > 0 && c == 0.0) continue;
      TorusElement term = scaled_derivation(k, c, symbol_derivative(rho, xi, k).adjoint());
      term *= std::pow(cplx(0.0, 2.0 * kPi), -total) / kfact;
      acc += term;
    }
    return acc;
  };
  return out;
}

TorusSymbol symbol_compose_exact(const TorusSymbol& a, const TorusSymbol& b,
                                 const ActionDescriptor& action) {
  if (a.n != b.n) throw std::invalid_argument("symbol_compose_exact: dimension mismatch");
  const double c = action.factor();
  TorusSymbol out;
  out.order = a.order + b.order;
  out.n = a.n;
  out.eval = [a, b, c](std::span<const double> xi) {
    const int n = static_cast<int>(xi.size());
    TorusElement acc(n);
    std::vector<double> shifted(n);
    const TorusElement bv = b.eval(xi);
    for (const auto& [nm, bn] : bv.coeffs()) {
      for (int k = 0; k < n; ++k) shifted[k] = xi[k] - c * nm[k];
      const TorusElement av = a.eval(shifted);
      for (const auto& [m, am] : av.coeffs()) {
        Mode p(n);
        for (int k = 0; k < n; ++k) p[k] = m[k] + nm[k];
        acc.add(p, am * bn);
      }
    }
    return acc;
  };
  return out;
}

namespace {

// physicists' Hermite polynomial H_k(y)
double hermite(int k, double y) {
  double h0 = 1.0, h1 = 2.0 * y;
  if (k == 0) return h0;
  for (int j = 1; j < k; ++j) {
    const double h2 = 2.0 * y * h1 - 2.0 * j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace

TorusSymbol gaussian_symbol(const TorusElement& coeffs, std::vector<double> center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_symbol: width must be positive");
  const int n = static_cast<int>(center.size());
  if (n != coeffs.dim()) throw std::invalid_argument("gaussian_symbol: dimension mismatch");
  TorusSymbol out;
  out.order = 0.0;
  out.n = n;
  out.eval = [coeffs, center, width](std::span<const double> xi) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < xi.size(); ++a) r2 += (xi[a] - center[a]) * (xi[a] - center[a]);
    TorusElement v = coeffs;
    v *= std::exp(-kPi * r2 / (width * width));
    return v;
  };
  out.deriv = [coeffs, center, width](std::span<const double> xi, std::span<const int> k) {
    const double scale = std::sqrt(kPi) / width;
    double factor = 1.0;
    for (std::size_t a = 0; a < xi.size(); ++a) {
      const double y = scale * (xi[a] - center[a]);
      const double sign = (k[a] % 2 == 0) ? 1.0 : -1.0;
      factor *= sign * std::pow(scale, k[a]) * hermite(k[a], y) * std::exp(-y * y);
    }
    TorusElement v = coeffs;
    v *= factor;
    return v;
  };
  return out;
}

TorusSymbol constant_symbol(const TorusElement& a, int n) {
  if (a.dim() != n) throw std::invalid_argument("constant_symbol: dimension mismatch");
  TorusSymbol out;
  out.order = 0.0;
  out.n = n;
  out.eval = [a](std::span<const double>) { return a; };
  out.deriv = [n](std::span<const double>, std::span<const int>) { return TorusElement(n); };
  return out;
}

cplx crossed_pairing(const RnCrossedElement& u, const RnCrossedElement& v) {
  if (!(u.spec() == v.spec()) || !(u.modes() == v.modes()))
    throw std::invalid_argument("crossed_pairing: shape mismatch");
  const auto& a = u.data().data();
  const auto& b = v.data().data();
  std::vector<cplx> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = std::conj(a[i]) * b[i];
  return pairwise_sum(terms) * u.spec().cell_volume();
}

}  // namespace nct
