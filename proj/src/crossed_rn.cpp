#include "nct/crossed_rn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nct/parallel.hpp"

namespace nct {

ModeBasis::ModeBasis(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw std::invalid_argument("ModeBasis: empty");
  n_ = static_cast<int>(modes_.front().size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (static_cast<int>(modes_[i].size()) != n_)
      throw std::invalid_argument("ModeBasis: inconsistent mode dimension");
    if (!index_.emplace(modes_[i], i).second) throw std::invalid_argument("ModeBasis: duplicate mode");
  }
}

ModeBasis ModeBasis::scalar(int n) { return ModeBasis({Mode(n, 0)}); }

ModeBasis ModeBasis::box(int n, int radius) {
  std::vector<Mode> modes;
  Mode m(n, -radius);
  while (true) {
    modes.push_back(m);
    int a = n - 1;
    while (a >= 0 && m[a] == radius) m[a--] = -radius;
    if (a < 0) break;
    ++m[a];
  }
  return ModeBasis(modes);
}

ModeBasis ModeBasis::orbit_closure(const std::vector<Mode>& seed, const CyclicAction& G) {
  std::set<Mode> all;
  for (const auto& m : seed)
    for (int r = 0; r < G.order(); ++r) {
      const auto img = beta(G, r, TorusElement::basis(m));
      all.insert(img.coeffs().begin()->first);
    }
  return ModeBasis(std::vector<Mode>(all.begin(), all.end()));
}

std::size_t ModeBasis::find(const Mode& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? npos : it->second;
}

RnCrossedElement::RnCrossedElement(GridFunction data, ModeBasis modes, ActionDescriptor action)
    : data_(std::move(data)), modes_(std::move(modes)), action_(action) {
  if (data_.width() != modes_.size())
    throw std::invalid_argument("RnCrossedElement: data width does not match the mode basis");
  if (action_.kind != ActionDescriptor::Kind::Trivial && modes_.torus_dim() != data_.spec().dim())
    throw std::invalid_argument("RnCrossedElement: action dimension does not match the torus");
  if (!data_.finite()) throw std::invalid_argument("RnCrossedElement: non-finite samples");
}

RnCrossedElement RnCrossedElement::sample(
    const GridSpec& spec, const ModeBasis& modes, ActionDescriptor action,
    const std::function<cplx(std::span<const double>, const Mode&)>& fn) {
  auto data = GridFunction::sample(spec, modes.size(), AlgebraKind::Torus,
                                   [&](std::span<const double> x, std::span<cplx> out) {
                                     for (std::size_t i = 0; i < modes.size(); ++i)
                                       out[i] = fn(x, modes[i]);
                                   });
  return RnCrossedElement(std::move(data), modes, action);
}

double max_difference(const GridFunction& a, const GridFunction& b) {
  if (!(a.spec() == b.spec()) || a.width() != b.width())
    throw std::invalid_argument("max_difference: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double RnCrossedElement::distance(const RnCrossedElement& other) const {
  if (!(modes_ == other.modes_)) throw std::invalid_argument("distance: mode basis mismatch");
  return max_difference(data_, other.data_);
}

RnCrossedElement RnCrossedElement::operator-(const RnCrossedElement& other) const {
  if (!(modes_ == other.modes_) || !(spec() == other.spec()))
    throw std::invalid_argument("RnCrossedElement: shape mismatch");
  GridFunction d = data_;
  for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= other.data_.data()[i];
  return RnCrossedElement(std::move(d), modes_, action_);
}

namespace {

bool all_zero(const GridFunction& f, std::size_t c) {
  for (std::size_t p = 0; p < f.spec().size(); ++p)
    if (f.at(p, c) != cplx{}) return false;
  return true;
}

// index of A (j - c) + c modulo N for an integer matrix A on a 2D grid; the
// periodic box is invariant under SL_2(Z) since A preserves the lattice 2L Z^2
std::size_t map_index2(const GridSpec& spec, const IntMatrix2& A, std::size_t p) {
  const int N = spec.points_per_axis();
  const int c = N / 2;
  int idx[2];
  spec.unflatten(p, idx);
  const int k0 = idx[0] - c, k1 = idx[1] - c;
  int out[2] = {A(0, 0) * k0 + A(0, 1) * k1 + c, A(1, 0) * k0 + A(1, 1) * k1 + c};
  for (int& v : out) v = ((v % N) + N) % N;
  return spec.flatten(out);
}

IntMatrix2 int_inverse(const IntMatrix2& g) {
  const int det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  if (det != 1 && det != -1) throw std::invalid_argument("group action: matrix is not unimodular");
  IntMatrix2 inv;
  inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  return det * inv;
}

// target component for each mode under beta_g (m -> g^{-T} m)
std::vector<std::size_t> beta_permutation(const IntMatrix2& g, const ModeBasis& modes) {
  if (modes.torus_dim() != 2) throw std::invalid_argument("group action: torus dimension must be 2");
  std::vector<std::size_t> perm(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto img = beta_matrix(g, TorusElement::basis(modes[i]));
    perm[i] = modes.find(img.coeffs().begin()->first);
    if (perm[i] == ModeBasis::npos)
      throw std::invalid_argument("group action: mode basis is not closed under the group");
  }
  return perm;
}

}  // namespace

RnCrossedElement twisted_conv(const RnCrossedElement& f, const RnCrossedElement& g) {
  return twisted_conv(f, g, DeformationMatrix::zero(f.modes().torus_dim()));
}

RnCrossedElement twisted_conv(const RnCrossedElement& f, const RnCrossedElement& g,
                              const DeformationMatrix& J) {
  if (!(f.spec() == g.spec())) throw std::invalid_argument("twisted_conv: grid mismatch");
  if (!(f.action() == g.action())) throw std::invalid_argument("twisted_conv: action mismatch");
  if (!(f.modes() == g.modes())) throw std::invalid_argument("twisted_conv: mode basis mismatch");
  const auto& spec = f.spec();
  const auto& modes = f.modes();
  const double c = f.action().factor();
  GridFunction out(spec, modes.size(), AlgebraKind::Torus);
  std::vector<std::string> warnings;
  std::vector<double> x(spec.dim());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (all_zero(f.data(), i)) continue;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      if (all_zero(g.data(), j)) continue;
      const Mode& m = modes[i];
      const Mode& n = modes[j];
      Mode p(m.size());
      for (std::size_t a = 0; a < m.size(); ++a) p[a] = m[a] + n[a];
      const std::size_t target = modes.find(p);
      if (target == ModeBasis::npos) {
        warnings.push_back("twisted_conv: product mode outside the basis dropped");
        continue;
      }
      // f_m(y) alpha_y(U_n) = f_m(y) e(-c <y, n>) U_n
      GridFunction left(spec);
      for (std::size_t q = 0; q < spec.size(); ++q) {
        spec.point(q, x);
        double dot = 0.0;
        for (int a = 0; a < spec.dim(); ++a) dot += x[a] * n[a];
        left.at(q) = f.data().at(q, i) * e_phase(-c * dot);
      }
      const GridFunction conv = convolve(left, g.data().component(j));
      const cplx phase = e_phase(kStarPhaseSign * star_exponent(J, m, n));
      for (std::size_t q = 0; q < spec.size(); ++q) out.at(q, target) += phase * conv.at(q);
    }
  }
  RnCrossedElement result(std::move(out), modes, f.action());
  if (!warnings.empty()) result.warnings.push_back(warnings.front());
  return result;
}

RnCrossedElement dual_action(std::span<const double> x, const RnCrossedElement& f) {
  const auto& spec = f.spec();
  if (static_cast<int>(x.size()) != spec.dim()) throw std::invalid_argument("dual_action: dimension mismatch");
  GridFunction out = f.data();
  std::vector<double> s(spec.dim());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.point(p, s);
    double dot = 0.0;
    for (int a = 0; a < spec.dim(); ++a) dot += x[a] * s[a];
    const cplx ph = e_phase(dot);
    for (auto& v : out.value(p)) v *= ph;
  }
  return RnCrossedElement(std::move(out), f.modes(), f.action());
}

RnCrossedElement gamma_action(std::span<const double> t, const RnCrossedElement& f) {
  const auto& spec = f.spec();
  const int n = spec.dim();
  const int N = spec.points_per_axis();
  if (static_cast<int>(t.size()) != n) throw std::invalid_argument("gamma_action: dimension mismatch");
  const double h = spec.step();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  bool on_lattice = true;
  for (int a = 0; a < n; ++a) {
    const double u = t[a] / h;
    base[a] = static_cast<int>(std::floor(u));
    frac[a] = u - base[a];
    if (frac[a] > 1.0 - 1e-12) {
      ++base[a];
      frac[a] = 0.0;
    }
    if (frac[a] < 1e-12) frac[a] = 0.0;
    else on_lattice = false;
  }
  GridFunction out(spec, f.data().width(), f.data().kind());
  std::vector<int> idx(n), src(n);
  const std::size_t corners = std::size_t{1} << n;
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.unflatten(p, idx);
    // s - t lies between lattice offsets -base-1 and -base
    for (std::size_t cmask = 0; cmask < corners; ++cmask) {
      double w = 1.0;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        const bool upper = (cmask >> a) & 1u;
        if (upper && frac[a] == 0.0) {
          w = 0.0;
          break;
        }
        src[a] = idx[a] - base[a] - (upper ? 1 : 0);
        w *= upper ? frac[a] : 1.0 - frac[a];
        if (src[a] < 0 || src[a] >= N) inside = false;
      }
      if (w == 0.0 || !inside) continue;
      const auto v = f.data().value(spec.flatten(src));
      auto o = out.value(p);
      for (std::size_t c = 0; c < v.size(); ++c) o[c] += w * v[c];
    }
  }
  RnCrossedElement result(std::move(out), f.modes(), f.action());
  // mass moved past the box boundary
  double lost = 0.0;
  std::vector<int> dst(n);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.unflatten(p, idx);
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      dst[a] = idx[a] + base[a];
      if (dst[a] < 0 || dst[a] + (frac[a] > 0.0 ? 1 : 0) >= N) inside = false;
    }
    if (!inside) lost = std::max(lost, f.data().point_norm(p));
  }
  if (lost > 0.0)
    result.warnings.push_back("gamma_action: samples of norm up to " + std::to_string(lost) +
                              " shifted out of the box were truncated");
  (void)on_lattice;
  return result;
}

RnCrossedElement theta_J(const RnCrossedElement& f, const DeformationMatrix& J) {
  const auto& modes = f.modes();
  if (J.dim() != modes.torus_dim() || J.dim() != f.spec().dim())
    throw std::invalid_argument("theta_J: dimension mismatch");
  GridFunction hat = fourier(f.data(), FourierSign::Forward);
  const GridSpec& dual = hat.spec();
  const int n = J.dim();
  std::vector<double> y(n);
  const double c = f.action().factor();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    // alpha_{Jy}(U_m) = e(-c <Jy, m>) U_m = e(c <y, J m>) U_m
    Eigen::VectorXd Jm = J.matrix() * Eigen::Map<const Eigen::VectorXi>(modes[i].data(), n).cast<double>();
    for (std::size_t p = 0; p < dual.size(); ++p) {
      dual.point(p, y);
      double dot = 0.0;
      for (int a = 0; a < n; ++a) dot += y[a] * Jm(a);
      hat.at(p, i) *= e_phase(c * dot);
    }
  }
  return RnCrossedElement(fourier(hat, FourierSign::Inverse), modes, f.action());
}

RnCrossedElement group_action(const IntMatrix2& g, const RnCrossedElement& f) {
  const auto& spec = f.spec();
  if (spec.dim() != 2) throw std::invalid_argument("group_action: grid must be two-dimensional");
  const auto perm = beta_permutation(g, f.modes());
  const IntMatrix2 ginv = int_inverse(g);
  GridFunction out(spec, f.data().width(), f.data().kind());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const std::size_t q = map_index2(spec, ginv, p);
    for (std::size_t i = 0; i < perm.size(); ++i) out.at(p, perm[i]) = f.data().at(q, i);
  }
  return RnCrossedElement(std::move(out), f.modes(), f.action());
}

// ---------------------------------------------------------------------------

namespace {

struct Split {
  int n;
  int N;
  std::size_t half;  // points per factor
};

Split split_of(const GridSpec& spec) {
  if (spec.dim() % 2 != 0) throw std::invalid_argument("product grid must have even dimension");
  Split s;
  s.n = spec.dim() / 2;
  s.N = spec.points_per_axis();
  s.half = 1;
  for (int a = 0; a < s.n; ++a) s.half *= s.N;
  return s;
}

GridSpec factor_spec(const GridSpec& spec) {
  return GridSpec(spec.dim() / 2, spec.half_width(), spec.step());
}

// 1D phase table e(x_j x_k) on one axis of the factor grid
std::vector<cplx> phase_table(const GridSpec& spec, double sign) {
  const int N = spec.points_per_axis();
  std::vector<cplx> t(static_cast<std::size_t>(N) * N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) t[j * N + k] = e_phase(sign * spec.coord(j) * spec.coord(k));
  return t;
}

}  // namespace

SmoothKernel takai_map(const DoubleCrossed& F) {
  const GridSpec& spec = F.data.spec();
  const Split sp = split_of(spec);
  const GridSpec fs = factor_spec(spec);
  const auto& modes = F.modes;
  const double c = F.action.factor();
  const int n = sp.n, N = sp.N;
  const std::size_t half = sp.half, W = modes.size();
  const auto table = phase_table(fs, 1.0);  // e(r t)
  const double vol = fs.cell_volume();

  GridFunction out(spec, W, AlgebraKind::Torus);
  parallel_for(half, [&](std::size_t s) {
    std::vector<double> sx(n), tx(n), rx(n);
    fs.point(s, sx);
    // G(t) = F(t, s) e(-<s, t>), then separable transform t -> r with e(<r, t>)
    std::vector<cplx> buf(half * W), tmp(half * W);
    for (std::size_t t = 0; t < half; ++t) {
      fs.point(t, tx);
      double dot = 0.0;
      for (int a = 0; a < n; ++a) dot += sx[a] * tx[a];
      const cplx ph = e_phase(-dot);
      for (std::size_t i = 0; i < W; ++i) buf[t * W + i] = F.data.at(t * half + s, i) * ph;
    }
    std::vector<int> idx(n);
    for (int a = 0; a < n; ++a) {
      std::fill(tmp.begin(), tmp.end(), cplx{});
      for (std::size_t q = 0; q < half; ++q) {
        fs.unflatten(q, idx);
        const int r = idx[a];
        for (int k = 0; k < N; ++k) {
          idx[a] = k;
          const std::size_t src = fs.flatten(idx);
          const cplx ph = table[r * N + k];
          for (std::size_t i = 0; i < W; ++i) tmp[q * W + i] += ph * buf[src * W + i];
          idx[a] = r;
        }
      }
      std::swap(buf, tmp);
    }
    for (std::size_t r = 0; r < half; ++r) {
      fs.point(r, rx);
      for (std::size_t i = 0; i < W; ++i) {
        double dot = 0.0;
        for (int a = 0; a < n; ++a) dot += rx[a] * modes[i][a];
        out.at(s * half + r, i) = vol * e_phase(c * dot) * buf[r * W + i];
      }
    }
  });
  return SmoothKernel{std::move(out), modes};
}

DoubleCrossed double_crossed_mul(const DoubleCrossed& F, const DoubleCrossed& G) {
  const GridSpec& spec = F.data.spec();
  if (!(spec == G.data.spec()) || !(F.modes == G.modes))
    throw std::invalid_argument("double_crossed_mul: shape mismatch");
  const Split sp = split_of(spec);
  const GridSpec fs = factor_spec(spec);
  const auto& modes = F.modes;
  const double c = F.action.factor();
  const int n = sp.n, N = sp.N;
  const std::size_t half = sp.half, W = modes.size();
  const double vol = spec.cell_volume();

  struct Pair {
    std::size_t i, j, p;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < W; ++i)
    for (std::size_t j = 0; j < W; ++j) {
      Mode p(n);
      for (int a = 0; a < n; ++a) p[a] = modes[i][a] + modes[j][a];
      const std::size_t t = modes.find(p);
      if (t != ModeBasis::npos) pairs.push_back({i, j, t});
    }

  GridFunction out(spec, W, AlgebraKind::Torus);
  parallel_for(spec.size(), [&](std::size_t P) {
    const std::size_t t = P / half, s = P % half;
    std::vector<int> ti(n), si(n), taui(n), sigi(n), d1(n), d2(n);
    std::vector<double> taux(n), sx(n), sigx(n);
    fs.unflatten(t, ti);
    fs.unflatten(s, si);
    fs.point(s, sx);
    std::vector<cplx> acc(W);
    for (std::size_t tau = 0; tau < half; ++tau) {
      fs.unflatten(tau, taui);
      fs.point(tau, taux);
      bool ok = true;
      // t - tau sits at index t - tau + N/2
      for (int a = 0; a < n; ++a) {
        d1[a] = ti[a] - taui[a] + N / 2;
        if (d1[a] < 0 || d1[a] >= N) ok = false;
      }
      if (!ok) continue;
      const std::size_t t_minus = fs.flatten(d1);
      for (std::size_t sig = 0; sig < half; ++sig) {
        fs.unflatten(sig, sigi);
        bool ok2 = true;
        for (int a = 0; a < n; ++a) {
          d2[a] = si[a] - sigi[a] + N / 2;
          if (d2[a] < 0 || d2[a] >= N) ok2 = false;
        }
        if (!ok2) continue;
        fs.point(sig, sigx);
        double dot = 0.0;
        for (int a = 0; a < n; ++a) dot += taux[a] * (sx[a] - sigx[a]);
        const cplx base = e_phase(dot);
        const std::size_t s_minus = fs.flatten(d2);
        for (const auto& pr : pairs) {
          const cplx a1 = F.data.at(tau * half + sig, pr.i);
          if (a1 == cplx{}) continue;
          double dn = 0.0;
          for (int a = 0; a < n; ++a) dn += sigx[a] * modes[pr.j][a];
          acc[pr.p] += a1 * e_phase(-c * dn) * G.data.at(t_minus * half + s_minus, pr.j) * base;
        }
      }
    }
    for (std::size_t i = 0; i < W; ++i) out.at(P, i) = vol * acc[i];
  });
  return DoubleCrossed{std::move(out), modes, F.action};
}

SmoothKernel kernel_compose(const SmoothKernel& k, const SmoothKernel& kp) {
  const GridSpec& spec = k.data.spec();
  if (!(spec == kp.data.spec()) || !(k.modes == kp.modes))
    throw std::invalid_argument("kernel_compose: shape mismatch");
  const Split sp = split_of(spec);
  const GridSpec fs = factor_spec(spec);
  const auto& modes = k.modes;
  const int n = sp.n, N = sp.N;
  const std::size_t half = sp.half, W = modes.size();
  const double vol = fs.cell_volume();

  struct Pair {
    std::size_t i, j, p;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < W; ++i)
    for (std::size_t j = 0; j < W; ++j) {
      Mode p(n);
      for (int a = 0; a < n; ++a) p[a] = modes[i][a] + modes[j][a];
      const std::size_t t = modes.find(p);
      if (t != ModeBasis::npos) pairs.push_back({i, j, t});
    }

  GridFunction out(spec, W, AlgebraKind::Torus);
  parallel_for(spec.size(), [&](std::size_t P) {
    const std::size_t s = P / half, r = P % half;
    std::vector<int> si(n), ri(n), gi(n), d1(n), d2(n);
    fs.unflatten(s, si);
    fs.unflatten(r, ri);
    std::vector<cplx> acc(W);
    for (std::size_t sig = 0; sig < half; ++sig) {
      fs.unflatten(sig, gi);
      bool ok = true;
      for (int a = 0; a < n; ++a) {
        d1[a] = si[a] - gi[a] + N / 2;
        d2[a] = ri[a] - gi[a] + N / 2;
        if (d1[a] < 0 || d1[a] >= N || d2[a] < 0 || d2[a] >= N) ok = false;
      }
      if (!ok) continue;
      const std::size_t q = fs.flatten(d1) * half + fs.flatten(d2);
      for (const auto& pr : pairs) acc[pr.p] += k.data.at(sig * half + r, pr.i) * kp.data.at(q, pr.j);
    }
    for (std::size_t i = 0; i < W; ++i) out.at(P, i) = vol * acc[i];
  });
  return SmoothKernel{std::move(out), modes};
}

namespace {

GridFunction product_group_map(const GridFunction& f, const ModeBasis& modes, const IntMatrix2& g,
                               const IntMatrix2& first, const IntMatrix2& second) {
  // out_{perm m}(x, y) = f_m(first x, second y)
  const GridSpec& spec = f.spec();
  if (spec.dim() != 4) throw std::invalid_argument("group action on product grid needs n = 2");
  const GridSpec fs = factor_spec(spec);
  const std::size_t half = fs.size();
  const auto perm = beta_permutation(g, modes);
  GridFunction out(spec, f.width(), f.kind());
  for (std::size_t x = 0; x < half; ++x) {
    const std::size_t sx = map_index2(fs, first, x);
    for (std::size_t y = 0; y < half; ++y) {
      const std::size_t sy = map_index2(fs, second, y);
      for (std::size_t i = 0; i < perm.size(); ++i)
        out.at(x * half + y, perm[i]) = f.at(sx * half + sy, i);
    }
  }
  return out;
}

}  // namespace

DoubleCrossed double_group_action(const IntMatrix2& g, const DoubleCrossed& F) {
  return DoubleCrossed{product_group_map(F.data, F.modes, g, g.transpose(), int_inverse(g)), F.modes,
                       F.action};
}

SmoothKernel kernel_group_action(const IntMatrix2& g, const SmoothKernel& k) {
  const IntMatrix2 ginv = int_inverse(g);
  return SmoothKernel{product_group_map(k.data, k.modes, g, ginv, ginv), k.modes};
}

}  // namespace nct
