#include "shg/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shg/error.hpp"
#include "shg/quadrature.hpp"

namespace shg {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
constexpr double kDecayExponent = 40.0;
constexpr double kLiftScale = 1.0;

// Ladder key: standard order is (b, a) lexicographic. In the t flavor the
// blocks (b, t) sit just below the blocks (t, s).
std::pair<double, std::pair<int, int>> ladder_key(int b, int a, int t) {
  if (t > 0 && a == t) return {t - 0.5, {a, b}};
  return {static_cast<double>(b), {a, b}};
}

std::vector<std::pair<int, int>> all_nonempty(const CompositionVector& n) {
  std::vector<std::pair<int, int>> out;
  for (int b = 2; b <= n.k; ++b)
    for (int a = 1; a < b; ++a)
      if (n.at(b, a) > 0) out.push_back({b, a});
  return out;
}

SpacetimePoint difference(const SpacetimePoint& xb, const SpacetimePoint& xa) {
  return {xb.x0 - xa.x0, xb.x1 - xa.x1};
}

// Flattened integrand with precomputed slot bookkeeping.
class Evaluator {
 public:
  Evaluator(const CorrelatorRequest& req, const CompositionVector& n, int t)
      : req_(req), n_(n) {
    const GTotSkeleton g = t == 0 ? expand_g_tot(req.k, n) : expand_g_tot_mixed(req.k, t, n);
    offsets_.assign(n.n.size(), 0);
    int off = 0;
    for (int b = 2; b <= n.k; ++b)
      for (int a = 1; a < b; ++a) {
        offsets_[CompositionVector::index(b, a)] = off;
        for (int j = 0; j < n.at(b, a); ++j) blocks_.push_back({b, a});
        off += n.at(b, a);
      }
    for (const auto& w : g.s_words)
      for (const auto& [u, v] : inversion_pairs(w.from, w.to))
        s_pairs_.push_back({flat(u), flat(v)});
    for (const auto& word : g.ff) {
      std::vector<std::pair<int, Shift>> args;
      for (const auto& s : word) args.push_back({flat(s), s.shift});
      ff_.push_back(std::move(args));
    }
  }

  int dim() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::pair<int, int>>& blocks() const { return blocks_; }

  cplx operator()(const std::vector<cplx>& g) const {
    cplx v = plane_waves(g);
    for (const auto& [u, w] : s_pairs_) v *= s_matrix(g[u] - g[w], req_.params);
    std::vector<cplx> args;
    for (std::size_t p = 0; p < ff_.size(); ++p) {
      args.clear();
      for (const auto& [i, sh] : ff_[p]) {
        cplx x = g[i];
        if (sh == Shift::PlusIPi) x += kI * kPi;
        if (sh == Shift::MinusIPi) x -= kI * kPi;
        args.push_back(x);
      }
      v *= req_.operators[p].form_factor(args);
    }
    return v;
  }

  cplx plane_waves(const std::vector<cplx>& g) const {
    const double m = req_.params.mass;
    if (req_.smearing.empty()) {
      cplx e = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto [b, a] = blocks_[i];
        const SpacetimePoint x = difference(req_.points[b - 1], req_.points[a - 1]);
        e += kI * m * (std::cosh(g[i]) * x.x0 - std::sinh(g[i]) * x.x1);
      }
      return std::exp(e);
    }
    std::vector<TwoVector> q(req_.k, TwoVector{0.0, 0.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto [b, a] = blocks_[i];
      const TwoVector p = momentum(g[i], req_.params);
      for (int c = 0; c < 2; ++c) {
        q[b - 1][c] += p[c];
        q[a - 1][c] -= p[c];
      }
    }
    cplx v = 1.0;
    for (int s = 0; s < req_.k; ++s) v *= gaussian_fourier(req_.smearing[s], q[s]);
    return v;
  }

  std::vector<cplx> flatten(const RapidityBlocks& gamma) const {
    std::vector<cplx> g;
    for (int b = 2; b <= n_.k; ++b)
      for (int a = 1; a < b; ++a)
        for (const auto& x : gamma.block(b, a)) g.push_back(x);
    return g;
  }

 private:
  int flat(const Slot& s) const {
    const int b = block_upper(s.block);
    const int a = block_lower(s.block);
    return offsets_[CompositionVector::index(b, a)] + s.index;
  }

  const CorrelatorRequest& req_;
  CompositionVector n_;
  std::vector<int> offsets_;
  std::vector<std::pair<int, int>> blocks_;
  std::vector<std::pair<int, int>> s_pairs_;
  std::vector<std::vector<std::pair<int, Shift>>> ff_;
};

// gamma(t) = t + i (eta + lift tanh^2(t / s)).
struct AxisContour {
  double eta = 0.0;
  double lift = 0.0;

  cplx at(double t) const {
    const double th = std::tanh(t / kLiftScale);
    return {t, eta + lift * th * th};
  }
  cplx derivative(double t) const {
    const double th = std::tanh(t / kLiftScale);
    return {1.0, lift * 2.0 * th * (1.0 - th * th) / kLiftScale};
  }
};

struct AxisSetup {
  AxisContour contour;
  SpacetimePoint x;      // x_ba, or the difference of smearing centers
  double spread = 0.0;   // summed Gaussian variances of both endpoints
  double half_width = 0.0;
};

double exponent_rate(const AxisSetup& ax, double t, double m) {
  const cplx g = ax.contour.at(t);
  const double jac = std::abs(ax.contour.derivative(t));
  double r = m * std::abs(ax.x.x0 * std::sinh(g) - ax.x.x1 * std::cosh(g));
  r += m * m * ax.spread * std::abs(std::sinh(g) * std::cosh(g));
  return r * jac;
}

std::vector<double> axis_breakpoints(const AxisSetup& ax, double m, const QuadratureSpec& q,
                                     double max_width) {
  std::vector<double> right{0.0};
  std::vector<double> left;
  for (int side = -1; side <= 1; side += 2) {
    double t = 0.0;
    while (t < ax.half_width) {
      const double r0 = exponent_rate(ax, side * t, m);
      double w = std::min(max_width, q.panel_phase / std::max(r0, 1e-300));
      const double r1 = exponent_rate(ax, side * std::min(t + w, ax.half_width), m);
      w = std::min(w, q.panel_phase / std::max(r1, 1e-300));
      t = std::min(t + w, ax.half_width);
      if (side > 0)
        right.push_back(t);
      else
        left.push_back(-t);
    }
  }
  std::reverse(left.begin(), left.end());
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

double initial_half_width(const CorrelatorRequest& req, const AxisSetup& ax) {
  const double m = req.params.mass;
  const double y = ax.contour.eta + ax.contour.lift;
  double estimate = req.quad.L;
  if (req.smearing.empty()) {
    const double c = m * std::sin(y) * (std::abs(ax.x.x1) - std::abs(ax.x.x0));
    if (!(c > 0.0)) throw Error(ErrorKind::Region, "plane wave does not decay on the contour");
    estimate = std::acosh(std::max(1.0, kDecayExponent / c));
  } else {
    const double c = m * m * ax.spread * std::cos(2.0 * y) / 8.0;
    if (c > 0.0) estimate = 0.5 * std::log(std::max(1.0, 8.0 * kDecayExponent / c));
  }
  return std::max(1.0, std::min(req.quad.L, estimate));
}

std::vector<double> eta_values(const ContourLadder& ladder, const CompositionVector& n) {
  std::vector<double> v;
  for (const auto& [b, a] : all_nonempty(n)) v.push_back(ladder.at(b, a));
  std::sort(v.begin(), v.end());
  return v;
}

WrResult sum_compositions(const CorrelatorRequest& req, int t) {
  req.validate();
  std::vector<double> omegas;
  for (const auto& op : req.operators) omegas.push_back(op.omega);
  WrResult res;
  for (const auto& n : enumerate_compositions(req.k, req.r)) {
    CompositionRow row;
    row.n = n;
    const InResult in = compute_I_n(req, n, t);
    row.I = in.value;
    row.error = in.error;
    double w = 0.0;
    for (int b = 2; b <= req.k; ++b)
      for (int a = 1; a < b; ++a)
        w += n.at(b, a) * (t == 0 ? omega_ba(b, a, omegas) : omega_ba_t(b, a, t, omegas));
    row.phase = std::exp(-2.0 * kI * kPi * w);
    row.norm = 1.0 / (n.factorial() * std::pow(2.0 * kPi, n.total()));
    row.contribution = row.I * row.phase * row.norm;
    res.total += row.contribution;
    res.error += row.error * row.norm;
    res.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace

TwoVector momentum(cplx beta, const ModelParams& params) {
  return {params.mass * std::cosh(beta), params.mass * std::sinh(beta)};
}

cplx minkowski_dot(const TwoVector& u, const TwoVector& v) { return u[0] * v[0] - u[1] * v[1]; }

RegionReport check_region(const std::vector<SpacetimePoint>& points) {
  RegionReport rep;
  const int k = static_cast<int>(points.size());
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const double d0 = points[a].x0 - points[b].x0;
      const double d1 = points[a].x1 - points[b].x1;
      std::string why;
      if (!(d0 * d0 - d1 * d1 < 0.0))
        why = "not space-like";
      else if (!(d1 > 0.0))
        why = "spatial order reversed";
      if (!why.empty()) {
        rep.inside = false;
        rep.a = a + 1;
        rep.b = b + 1;
        rep.reason = "points " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + ": " + why;
        return rep;
      }
    }
  return rep;
}

double eta_ceiling(const ModelParams& params) {
  double lim = kPi / 2.0;
  if (params.b > 0.0) lim = std::min(lim, 2.0 * kPi * params.b);
  if (params.b_hat > 0.0) lim = std::min(lim, kPi * (1.0 - 2.0 * params.b));
  return lim / 4.0;
}

std::vector<std::pair<int, int>> ladder_order(const CompositionVector& n, int t) {
  auto blocks = all_nonempty(n);
  std::sort(blocks.begin(), blocks.end(), [t](const auto& x, const auto& y) {
    return ladder_key(x.first, x.second, t) < ladder_key(y.first, y.second, t);
  });
  return blocks;
}

ContourLadder default_ladder(int k, const CompositionVector& n, const ModelParams& params,
                             int t) {
  ContourLadder lad{k, std::vector<double>(CompositionVector::size_for(k), 0.0)};
  const auto order = ladder_order(n, t);
  const double top = eta_ceiling(params);
  const double count = static_cast<double>(order.size()) + 1.0;
  for (std::size_t i = 0; i < order.size(); ++i)
    lad.at(order[i].first, order[i].second) = top * static_cast<double>(i + 1) / count;
  return lad;
}

ContourLadder random_ladder(int k, const CompositionVector& n, const ModelParams& params,
                            std::mt19937& rng, int t) {
  ContourLadder lad = default_ladder(k, n, params, t);
  const double spacing = eta_ceiling(params) / (static_cast<double>(ladder_order(n, t).size()) + 1.0);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (const auto& [b, a] : ladder_order(n, t)) lad.at(b, a) += jitter(rng) * spacing;
  return lad;
}

bool ladder_admissible(const ContourLadder& ladder, const CompositionVector& n,
                       const ModelParams& params, int t, std::string* why) {
  const auto fail = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (ladder.k != n.k || ladder.eta.size() != n.n.size()) return fail("ladder size mismatch");
  const double top = eta_ceiling(params);
  double prev = 0.0;
  for (const auto& [b, a] : ladder_order(n, t)) {
    const double e = ladder.at(b, a);
    const std::string tag = "eta(" + std::to_string(b) + std::to_string(a) + ")";
    if (!(e > prev)) return fail(tag + " breaks the strict ordering");
    if (e > top) return fail(tag + " exceeds the ceiling");
    prev = e;
  }
  return true;
}

cplx gaussian_fourier(const GaussianSmearing& g, const TwoVector& q) {
  const cplx e = kI * (q[0] * g.c0 - q[1] * g.c1) -
                 0.5 * (g.s0 * g.s0 * q[0] * q[0] + g.s1 * g.s1 * q[1] * q[1]);
  return g.amplitude * std::exp(e);
}

void CorrelatorRequest::validate() const {
  if (k < 2) throw Error(ErrorKind::Config, "k must be at least 2");
  if (static_cast<int>(operators.size()) != k)
    throw Error(ErrorKind::Config, "operator count must equal k");
  for (const auto& op : operators)
    if (!op.provider) throw Error(ErrorKind::Config, "operator " + op.name + " has no provider");
  if (static_cast<int>(r.size()) != k - 1)
    throw Error(ErrorKind::Config, "truncation vector must have k-1 entries");
  if (smearing.empty()) {
    if (static_cast<int>(points.size()) != k)
      throw Error(ErrorKind::Config, "point count must equal k");
  } else if (static_cast<int>(smearing.size()) != k) {
    throw Error(ErrorKind::Config, "smearing count must equal k");
  }
  if (quad.nodes < 4) throw Error(ErrorKind::Config, "at least 4 nodes per panel");
  if (!(quad.L > 0.0) || !(quad.tol > 0.0) || !(quad.panel_phase > 0.0) ||
      !(quad.max_panel_width > 0.0) || !(quad.gap_width > 0.0))
    throw Error(ErrorKind::Config, "quadrature parameters must be positive");
}

cplx plane_wave_factor(const CorrelatorRequest& req, const RapidityBlocks& gamma) {
  const Evaluator ev(req, gamma.n, 0);
  return ev.plane_waves(ev.flatten(gamma));
}

cplx integrand(const CorrelatorRequest& req, const CompositionVector& n,
               const RapidityBlocks& gamma, int t) {
  req.validate();
  const Evaluator ev(req, n, t);
  return ev(ev.flatten(gamma));
}

InResult compute_I_n(const CorrelatorRequest& req, const CompositionVector& n, int t) {
  req.validate();
  if (n.k != req.k) throw Error(ErrorKind::Config, "composition does not match k");
  if (req.smearing.empty()) {
    const RegionReport reg = check_region(req.points);
    if (!reg.inside) throw Error(ErrorKind::Region, "outside the space-like region: " + reg.reason);
  }
  const Evaluator ev(req, n, t);
  InResult res;
  if (ev.dim() == 0) {
    res.value = ev({});
    return res;
  }

  const ContourLadder ladder = req.ladder ? *req.ladder : default_ladder(req.k, n, req.params, t);
  std::string why;
  if (!ladder_admissible(ladder, n, req.params, t, &why))
    throw Error(ErrorKind::Config, "inadmissible contour ladder: " + why);
  const auto etas = eta_values(ladder, n);
  double lift = 0.0;
  if (req.quad.shape == ContourShape::Lifted) {
    const double roof = req.smearing.empty() ? kPi / 2.0 : kPi / 5.0;
    lift = std::max(0.0, roof - etas.back());
  }
  double max_width = req.quad.max_panel_width;
  for (std::size_t i = 1; i < etas.size(); ++i)
    max_width = std::min(max_width, req.quad.gap_width * (etas[i] - etas[i - 1]));

  std::vector<AxisSetup> axes;
  for (const auto& [b, a] : ev.blocks()) {
    AxisSetup ax;
    ax.contour = {ladder.at(b, a), lift};
    if (req.smearing.empty()) {
      ax.x = difference(req.points[b - 1], req.points[a - 1]);
    } else {
      const auto& gb = req.smearing[b - 1];
      const auto& ga = req.smearing[a - 1];
      ax.x = {gb.c0 - ga.c0, gb.c1 - ga.c1};
      ax.spread = gb.s0 * gb.s0 + gb.s1 * gb.s1 + ga.s0 * ga.s0 + ga.s1 * ga.s1;
    }
    ax.half_width = initial_half_width(req, ax);
    axes.push_back(ax);
  }

  const auto eval_at = [&](const std::vector<double>& t_vals) {
    std::vector<cplx> g(t_vals.size());
    cplx jac = 1.0;
    for (std::size_t j = 0; j < t_vals.size(); ++j) {
      g[j] = axes[j].contour.at(t_vals[j]);
      jac *= axes[j].contour.derivative(t_vals[j]);
    }
    return ev(g) * jac;
  };

  // Grow each half-width until the boundary slab is negligible.
  const int d = ev.dim();
  double interior = std::abs(eval_at(std::vector<double>(d, 0.0)));
  for (int j = 0; j < d; ++j) {
    std::vector<double> probe(d, 0.0);
    for (double s : {-0.5, 0.5}) {
      probe[j] = s;
      interior = std::max(interior, std::abs(eval_at(probe)));
    }
  }
  for (int iter = 0; iter < 60; ++iter) {
    bool grown = false;
    for (int j = 0; j < d; ++j) {
      double edge = 0.0;
      std::vector<double> probe(d, 0.0);
      for (double s : {-1.0, 1.0}) {
        probe[j] = s * axes[j].half_width;
        edge = std::max(edge, std::abs(eval_at(probe)));
      }
      if (edge > 1e-2 * req.quad.tol * interior) {
        axes[j].half_width += 0.5;
        grown = true;
      }
    }
    if (!grown) break;
    if (iter == 59) throw Error(ErrorKind::NonConvergence, "truncation half-width did not settle");
  }

  std::vector<Rule1D> fine, coarse;
  for (const auto& ax : axes) {
    const auto cuts = axis_breakpoints(ax, req.params.mass, req.quad, max_width);
    fine.push_back(composite_rule(cuts, req.quad.nodes));
    coarse.push_back(composite_rule(cuts, std::max(2, req.quad.nodes / 2)));
    res.half_width.push_back(ax.half_width);
  }
  std::vector<const Rule1D*> fine_axes, coarse_axes;
  res.nodes = 1;
  for (std::size_t j = 0; j < fine.size(); ++j) {
    fine_axes.push_back(&fine[j]);
    coarse_axes.push_back(&coarse[j]);
    res.nodes *= fine[j].x.size();
  }
  const cplx f = tensor_sum(fine_axes, eval_at, req.quad.threads);
  const cplx c = tensor_sum(coarse_axes, eval_at, req.quad.threads);
  res.value = f;
  res.error = std::abs(f - c);
  if (res.error > req.quad.tol * std::max(1.0, std::abs(f)))
    throw Error(ErrorKind::NonConvergence, "node doubling changed I_n (" + n.to_string() +
                                               ") by " + std::to_string(res.error));
  return res;
}

WrResult compute_W_r(const CorrelatorRequest& req) { return sum_compositions(req, 0); }

WrResult compute_W_r_mixed(const CorrelatorRequest& req, int t) {
  if (t < 1 || t > req.k) throw Error(ErrorKind::Config, "mixed representation index out of range");
  return sum_compositions(req, t);
}

WrResult smeared_correlator(const CorrelatorRequest& req, int t) {
  if (static_cast<int>(req.smearing.size()) != req.k)
    throw Error(ErrorKind::Config, "smeared correlator needs one Gaussian per operator");
  if (t < 0 || t > req.k) throw Error(ErrorKind::Config, "mixed representation index out of range");
  return sum_compositions(req, t);
}

}  // namespace shg
