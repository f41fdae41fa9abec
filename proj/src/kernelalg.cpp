#include "shg/kernelalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shg/error.hpp"
#include "shg/quadrature.hpp"

namespace shg {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Slot alpha_slot(int i) { return Slot{kAlphaBlock, i, Shift::None, Boundary::None}; }
Slot beta_slot(int i) { return Slot{kBetaBlock, i, Shift::None, Boundary::None}; }

VectorWord alpha_word(const std::vector<int>& idx) {
  VectorWord w;
  for (int i : idx) w.push_back(alpha_slot(i));
  return w;
}

VectorWord beta_word(const std::vector<int>& idx) {
  VectorWord w;
  for (int i : idx) w.push_back(beta_slot(i));
  return w;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Increasing p-subsets of the given index list, lexicographic.
std::vector<std::vector<int>> subsets(const std::vector<int>& from, int p) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(from.size());
  if (p < 0 || p > n) return out;
  std::vector<int> pick(p);
  for (int i = 0; i < p; ++i) pick[i] = i;
  while (true) {
    std::vector<int> s(p);
    for (int i = 0; i < p; ++i) s[i] = from[pick[i]];
    out.push_back(std::move(s));
    int i = p - 1;
    while (i >= 0 && pick[i] == n - p + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<int> minus(const std::vector<int>& from, const std::vector<int>& drop) {
  std::vector<int> out;
  for (int v : from)
    if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
  return out;
}

// Ordered selections of p distinct entries of `from`.
std::vector<std::vector<int>> arrangements_of(const std::vector<int>& from, int p) {
  std::vector<std::vector<int>> out;
  for (const auto& sel : arrangements(static_cast<int>(from.size()), p)) {
    std::vector<int> v;
    for (int i : sel) v.push_back(from[i]);
    out.push_back(std::move(v));
  }
  return out;
}

void check_size(int n, int m) {
  if (n < 0 || m < 0) throw Error(ErrorKind::Domain, "kernel sizes must be non-negative");
  if (n > kMaxKernelSize || m > kMaxKernelSize)
    throw Error(ErrorKind::Domain, "kernel size above the supported limit");
}

double binomial(int n, int p) {
  double r = 1.0;
  for (int i = 1; i <= p; ++i) r = r * (n - p + i) / i;
  return r;
}

long long falling(int m, int p) {
  long long r = 1;
  for (int i = 0; i < p; ++i) r *= (m - i);
  return r;
}

nlohmann::json word_json(const VectorWord& w) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : w) out.push_back(to_string(s));
  return out;
}

nlohmann::json s_words_json(const std::vector<SWord>& words) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : words) out.push_back({{"from", word_json(w.from)}, {"to", word_json(w.to)}});
  return out;
}

cplx shifted_value(const Slot& s, cplx base, double eps) {
  cplx v = base;
  if (s.shift == Shift::PlusIPi) v += kI * kPi;
  if (s.shift == Shift::MinusIPi) v -= kI * kPi;
  if (s.boundary == Boundary::Plus) v += kI * eps;
  if (s.boundary == Boundary::Minus) v -= kI * eps;
  return v;
}

// Imaginary profile h(t) of the free contours t + i delta h(t). A tagged alpha
// with boundary tau carries a pole at alpha + i tau eps, so h(alpha) has sign -tau.
class ContourProfile {
 public:
  explicit ContourProfile(std::vector<std::pair<double, int>> tagged) {
    std::sort(tagged.begin(), tagged.end());
    int prev = 0;
    double prev_x = 0.0;
    for (const auto& [x, tau] : tagged) {
      const int s = -tau;
      if (prev == 0) {
        base_ = s;
      } else if (s != prev) {
        const double gap = x - prev_x;
        if (gap <= 0.0)
          throw Error(ErrorKind::Coincidence, "tagged rapidities with opposite boundaries coincide");
        steps_.push_back({0.5 * (x + prev_x), gap / 8.0, 0.5 * (s - prev)});
      }
      prev = s;
      prev_x = x;
    }
  }

  double value(double t) const {
    double h = base_;
    for (const auto& st : steps_) h += st.jump * (1.0 + std::tanh((t - st.mid) / st.scale));
    return h;
  }

  double derivative(double t) const {
    double d = 0.0;
    for (const auto& st : steps_) {
      const double c = std::cosh((t - st.mid) / st.scale);
      d += st.jump / (st.scale * c * c);
    }
    return d;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (const auto& st : steps_)
      for (int j = -2; j <= 2; ++j) out.push_back(st.mid + 2.0 * j * st.scale);
    return out;
  }

 private:
  struct Step {
    double mid;
    double scale;
    double jump;
  };
  double base_ = 0.0;
  std::vector<Step> steps_;
};

cplx pair_term(const FormalTerm& term, const std::vector<double>& alpha, const GaussianTest& test,
               const OperatorSpec& op, const ModelParams& params, double eps,
               const PairingOptions& options, int m) {
  std::vector<cplx> alpha_c(alpha.begin(), alpha.end());
  std::vector<cplx> beta(m, 0.0);
  std::vector<bool> fixed(m, false);
  for (const auto& d : term.dirac) {
    beta[d.beta.index] = alpha[d.alpha.index];
    fixed[d.beta.index] = true;
  }
  std::vector<int> free;
  for (int i = 0; i < m; ++i)
    if (!fixed[i]) free.push_back(i);

  if (free.empty()) return term_value(term, alpha_c, beta, eps, op, params) * test(beta);

  std::vector<std::pair<double, int>> tagged;
  for (const auto& s : term.ff)
    if (s.block == kAlphaBlock && s.boundary != Boundary::None)
      tagged.push_back({alpha[s.index], s.boundary == Boundary::Plus ? 1 : -1});
  const ContourProfile profile(tagged);
  const double delta = contour_offset(params);

  std::vector<Rule1D> rules;
  for (int i : free) {
    const double c = test.center[i];
    const double half = options.half_range * test.width[i];
    rules.push_back(composite_rule(
        panel_breakpoints(c - half, c + half, options.panel_width * test.width[i],
                          profile.breakpoints()),
        options.gl_order));
  }
  std::vector<const Rule1D*> axes;
  for (const auto& r : rules) axes.push_back(&r);

  const auto integrand = [&](const std::vector<double>& t) {
    std::vector<cplx> b = beta;
    cplx jac = 1.0;
    for (std::size_t j = 0; j < free.size(); ++j) {
      b[free[j]] = cplx(t[j], delta * profile.value(t[j]));
      jac *= cplx(1.0, delta * profile.derivative(t[j]));
    }
    return term_value(term, alpha_c, b, eps, op, params) * test(b) * jac;
  };
  return tensor_sum(axes, integrand) / std::pow(2.0 * kPi, static_cast<double>(free.size()));
}

// Neville estimate at zero from consecutive points [first, first + order].
cplx neville_at_zero(const std::vector<double>& x, const std::vector<cplx>& y, int first,
                     int order) {
  std::vector<cplx> p(y.begin() + first, y.begin() + first + order + 1);
  for (int level = 1; level <= order; ++level)
    for (int i = 0; i + level <= order; ++i) {
      const double xi = x[first + i];
      const double xj = x[first + i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  return p[0];
}

VectorWord block_word(const CompositionVector& c, int b, int a) {
  VectorWord w;
  for (int j = 0; j < c.at(b, a); ++j) w.push_back(Slot{block_id(b, a), j, Shift::None, Boundary::None});
  return w;
}

// <-gamma^{(p,p-1)} u ... u <-gamma^{(p,1)}
VectorWord incoming_word(const CompositionVector& c, int p) {
  VectorWord w;
  for (int a = p - 1; a >= 1; --a) w = concat(w, reversed(block_word(c, p, a)));
  return w;
}

// gamma^{(k,p)} u ... u gamma^{(p+1,p)}
VectorWord outgoing_word(const CompositionVector& c, int p) {
  VectorWord w;
  for (int b = c.k; b > p; --b) w = concat(w, block_word(c, b, p));
  return w;
}

void add_swap(std::vector<SWord>& words, const VectorWord& x, const VectorWord& y) {
  if (x.empty() || y.empty()) return;
  words.push_back({concat(x, y), concat(y, x)});
}

void check_composition(int k, const CompositionVector& n) {
  if (k < 2) throw Error(ErrorKind::Domain, "k must be at least 2");
  if (n.k != k || static_cast<int>(n.n.size()) != CompositionVector::size_for(k))
    throw Error(ErrorKind::Domain, "composition does not match k");
  for (int v : n.n)
    if (v < 0) throw Error(ErrorKind::Domain, "composition entries must be non-negative");
}

GTotSkeleton base_skeleton(int k, const CompositionVector& n) {
  GTotSkeleton g;
  g.k = k;
  g.n = n;
  for (int v = 4; v <= k; ++v)
    for (int p = 3; p < v; ++p)
      for (int u = 2; u <= p - 1; ++u)
        for (int s = 1; s < u; ++s) add_swap(g.s_words, block_word(n, v, u), block_word(n, p, s));
  for (int b = 2; b <= k; ++b)
    for (int a = 1; a < b; ++a)
      if (n.at(b, a) > 0) g.blocks.push_back({b, a});
  return g;
}

}  // namespace

std::string to_string(KernelFlavor f) {
  switch (f) {
    case KernelFlavor::Direct: return "direct";
    case KernelFlavor::Dual: return "dual";
    case KernelFlavor::Mixed: return "mixed";
    case KernelFlavor::Jump: return "jump";
    case KernelFlavor::Custom: return "custom";
  }
  return "unknown";
}

nlohmann::json FormalKernelSum::to_json() const {
  nlohmann::json doc;
  doc["n"] = n;
  doc["m"] = m;
  doc["flavor"] = to_string(flavor);
  if (flavor == KernelFlavor::Mixed) doc["a1"] = a1;
  doc["terms"] = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json jt;
    jt["phase_exponent"] = t.phase_exponent;
    jt["sign"] = t.sign;
    jt["dirac"] = nlohmann::json::array();
    for (const auto& d : t.dirac) jt["dirac"].push_back({to_string(d.alpha), to_string(d.beta)});
    jt["s_words"] = s_words_json(t.s_words);
    jt["ff"] = word_json(t.ff);
    doc["terms"].push_back(std::move(jt));
  }
  return doc;
}

FormalKernelSum expand_direct(int n, int m) {
  check_size(n, m);
  FormalKernelSum sum{n, m, KernelFlavor::Direct, {}, {}};
  const auto all_a = iota(n);
  const VectorWord a_rev = reversed(alpha_word(all_a));
  const VectorWord b_all = beta_word(iota(m));
  for (int p = 0; p <= std::min(n, m); ++p)
    for (const auto& a1 : subsets(all_a, p))
      for (const auto& b1 : arrangements(m, p)) {
        const auto a2 = minus(all_a, a1);
        const auto b2 = complement(m, b1);
        FormalTerm t;
        t.phase_exponent = n;
        for (int r = 0; r < p; ++r) t.dirac.push_back({alpha_slot(a1[r]), beta_slot(b1[r])});
        t.s_words.push_back({a_rev, concat(reversed(alpha_word(a2)), reversed(alpha_word(a1)))});
        t.s_words.push_back({b_all, concat(beta_word(b1), beta_word(b2))});
        t.ff = concat(with_tags(reversed(alpha_word(a2)), Shift::PlusIPi, Boundary::Minus),
                      beta_word(b2));
        sum.terms.push_back(std::move(t));
      }
  return sum;
}

FormalKernelSum expand_dual(int n, int m) {
  check_size(n, m);
  FormalKernelSum sum{n, m, KernelFlavor::Dual, {}, {}};
  const auto all_a = iota(n);
  const VectorWord a_rev = reversed(alpha_word(all_a));
  const VectorWord b_all = beta_word(iota(m));
  for (int p = 0; p <= std::min(n, m); ++p)
    for (const auto& a1 : subsets(all_a, p))
      for (const auto& b1 : arrangements(m, p)) {
        const auto a2 = minus(all_a, a1);
        const auto b2 = complement(m, b1);
        FormalTerm t;
        t.phase_exponent = 0;
        for (int r = 0; r < p; ++r) t.dirac.push_back({alpha_slot(a1[r]), beta_slot(b1[r])});
        t.s_words.push_back({a_rev, concat(alpha_word(a1), alpha_word(a2))});
        t.s_words.push_back({b_all, concat(beta_word(b2), reversed(beta_word(b1)))});
        t.ff = concat(beta_word(b2),
                      with_tags(alpha_word(a2), Shift::MinusIPi, Boundary::Plus));
        sum.terms.push_back(std::move(t));
      }
  return sum;
}

FormalKernelSum expand_mixed(int n, int m, const std::vector<int>& a1) {
  check_size(n, m);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    if (a1[i] < 0 || a1[i] >= n) throw Error(ErrorKind::Domain, "A1 index out of range");
    if (i > 0 && a1[i] <= a1[i - 1]) throw Error(ErrorKind::Domain, "A1 indices must increase");
  }
  FormalKernelSum sum{n, m, KernelFlavor::Mixed, a1, {}};
  const auto all_a = iota(n);
  const auto a2 = minus(all_a, a1);
  const VectorWord a_rev = reversed(alpha_word(all_a));
  const VectorWord a1_rev = reversed(alpha_word(a1));
  const VectorWord a2_rev = reversed(alpha_word(a2));
  const VectorWord b_all = beta_word(iota(m));
  const int n1 = static_cast<int>(a1.size());
  const int n2 = static_cast<int>(a2.size());
  for (int total = 0; total <= std::min(n, m); ++total)
    for (int c = std::max(0, total - n2); c <= std::min(n1, total); ++c) {
      const int d = total - c;
      for (const auto& c1 : subsets(a1, c))
        for (const auto& d1 : subsets(a2, d))
          for (const auto& b1 : arrangements(m, c))
            for (const auto& b3 : arrangements_of(complement(m, b1), d)) {
              const auto c2 = minus(a1, c1);
              const auto d2 = minus(a2, d1);
              std::vector<int> used = b1;
              used.insert(used.end(), b3.begin(), b3.end());
              const auto b2 = complement(m, used);
              FormalTerm t;
              t.phase_exponent = n1;
              for (int r = 0; r < c; ++r) t.dirac.push_back({alpha_slot(c1[r]), beta_slot(b1[r])});
              for (int r = 0; r < d; ++r) t.dirac.push_back({alpha_slot(d1[r]), beta_slot(b3[r])});
              t.s_words.push_back({a_rev, concat(a2_rev, a1_rev)});
              t.s_words.push_back(
                  {a1_rev, concat(reversed(alpha_word(c2)), reversed(alpha_word(c1)))});
              t.s_words.push_back(
                  {a2_rev, concat(reversed(alpha_word(d1)), reversed(alpha_word(d2)))});
              t.s_words.push_back(
                  {b_all, concat(concat(beta_word(b1), beta_word(b2)), beta_word(b3))});
              t.ff = concat(
                  concat(with_tags(reversed(alpha_word(c2)), Shift::PlusIPi, Boundary::Minus),
                         beta_word(b2)),
                  with_tags(reversed(alpha_word(d2)), Shift::MinusIPi, Boundary::Plus));
              sum.terms.push_back(std::move(t));
            }
    }
  return sum;
}

std::vector<FormalTerm> jump_terms(int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "jump terms need n >= 1");
  check_size(1, n);
  std::vector<FormalTerm> out;
  const VectorWord b_all = beta_word(iota(n));
  for (int family = 0; family < 2; ++family)
    for (int a = 0; a < n; ++a) {
      std::vector<int> rest;
      for (int k = 0; k < n; ++k)
        if (k != a) rest.push_back(k);
      FormalTerm t;
      t.sign = family == 0 ? 1 : -1;
      t.phase_exponent = family == 0 ? 0 : -1;
      t.dirac.push_back({alpha_slot(0), beta_slot(a)});
      const VectorWord lone = beta_word({a});
      t.s_words.push_back({b_all, family == 0 ? concat(lone, beta_word(rest))
                                              : concat(beta_word(rest), lone)});
      t.ff = beta_word(rest);
      out.push_back(std::move(t));
    }
  return out;
}

long long direct_term_count(int n, int m) {
  long long total = 0;
  for (int p = 0; p <= std::min(n, m); ++p)
    total += static_cast<long long>(binomial(n, p) + 0.5) * falling(m, p);
  return total;
}

long long mixed_term_count(int n, int m, int a1_size) {
  const int n2 = n - a1_size;
  long long total = 0;
  for (int c = 0; c <= a1_size; ++c)
    for (int d = 0; d <= n2; ++d)
      if (c + d <= m)
        total += static_cast<long long>(binomial(a1_size, c) + 0.5) *
                 static_cast<long long>(binomial(n2, d) + 0.5) * falling(m, c + d);
  return total;
}

bool term_well_formed(const FormalTerm& t, int n, int m) {
  std::vector<int> seen_a(n, 0), seen_b(m, 0);
  const auto visit = [&](const Slot& s) {
    if (s.block == kAlphaBlock && s.index >= 0 && s.index < n) return ++seen_a[s.index], true;
    if (s.block == kBetaBlock && s.index >= 0 && s.index < m) return ++seen_b[s.index], true;
    return false;
  };
  for (const auto& d : t.dirac) {
    if (d.alpha.block != kAlphaBlock || d.beta.block != kBetaBlock) return false;
    if (!visit(d.alpha) || !visit(d.beta)) return false;
  }
  for (const auto& s : t.ff)
    if (!visit(s)) return false;
  for (int v : seen_a)
    if (v != 1) return false;
  for (int v : seen_b)
    if (v != 1) return false;
  return true;
}

cplx GaussianTest::operator()(const std::vector<cplx>& beta) const {
  cplx e = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const cplx u = (beta[i] - center[i]) / width[i];
    e -= 0.5 * u * u;
  }
  return std::exp(e);
}

double contour_offset(const ModelParams& params) {
  double lim = kPi / 2.0;
  if (params.b > 0.0) lim = std::min(lim, 2.0 * kPi * params.b);
  if (params.b_hat > 0.0) lim = std::min(lim, 2.0 * kPi * params.b_hat);
  return lim / 3.0;
}

cplx term_value(const FormalTerm& t, const std::vector<cplx>& alpha,
                const std::vector<cplx>& beta, double eps, const OperatorSpec& op,
                const ModelParams& params) {
  const SlotValues values = [&](const Slot& s) {
    return s.block == kAlphaBlock ? alpha[s.index] : beta[s.index];
  };
  cplx v = static_cast<double>(t.sign);
  if (t.phase_exponent != 0)
    v *= std::exp(-2.0 * kI * kPi * op.omega * static_cast<double>(t.phase_exponent));
  for (const auto& w : t.s_words) v *= s_product(w.from, w.to, values, params);
  std::vector<cplx> args;
  args.reserve(t.ff.size());
  for (const auto& s : t.ff) args.push_back(shifted_value(s, values(s), eps));
  return v * op.form_factor(args);
}

cplx pair_at_eps(const FormalKernelSum& sum, const std::vector<double>& alpha,
                 const GaussianTest& test, const OperatorSpec& op, const ModelParams& params,
                 double eps, const PairingOptions& options) {
  if (static_cast<int>(alpha.size()) != sum.n)
    throw Error(ErrorKind::Domain, "alpha size does not match the kernel");
  if (static_cast<int>(test.center.size()) != sum.m ||
      static_cast<int>(test.width.size()) != sum.m)
    throw Error(ErrorKind::Domain, "test function dimension does not match the kernel");
  cplx total = 0.0;
  for (const auto& term : sum.terms)
    total += pair_term(term, alpha, test, op, params, eps, options, sum.m);
  return total;
}

PairingResult pair_numeric(const FormalKernelSum& sum, const std::vector<double>& alpha,
                           const GaussianTest& test, const OperatorSpec& op,
                           const ModelParams& params, const PairingOptions& options) {
  const int count = static_cast<int>(options.eps.size());
  if (count < options.order + 1 || options.order < 0)
    throw Error(ErrorKind::Config, "eps sequence too short for the extrapolation order");
  PairingResult res;
  for (double e : options.eps) res.per_eps.push_back(pair_at_eps(sum, alpha, test, op, params, e, options));
  const int last = count - options.order - 1;
  res.value = neville_at_zero(options.eps, res.per_eps, last, options.order);
  cplx previous = res.per_eps.back();
  if (last > 0)
    previous = neville_at_zero(options.eps, res.per_eps, last - 1, options.order);
  else if (options.order > 0)
    previous = neville_at_zero(options.eps, res.per_eps, 1, options.order - 1);
  res.error = std::abs(res.value - previous);
  if (!(res.error <= options.tol))
    throw Error(ErrorKind::NonConvergence,
                "eps extrapolation did not settle: successive estimates differ by " +
                    std::to_string(res.error));
  return res;
}

nlohmann::json GTotSkeleton::to_json() const {
  nlohmann::json doc;
  doc["k"] = k;
  doc["composition"] = n.n;
  doc["t"] = t;
  doc["s_words"] = s_words_json(s_words);
  doc["ff"] = nlohmann::json::array();
  for (const auto& w : ff) doc["ff"].push_back(word_json(w));
  doc["blocks"] = nlohmann::json::array();
  for (const auto& [b, a] : blocks) doc["blocks"].push_back({b, a});
  return doc;
}

GTotSkeleton expand_g_tot(int k, const CompositionVector& n) {
  check_composition(k, n);
  GTotSkeleton g = base_skeleton(k, n);
  for (int p = 1; p <= k; ++p)
    g.ff.push_back(concat(with_tags(incoming_word(n, p), Shift::PlusIPi, Boundary::Minus),
                          outgoing_word(n, p)));
  return g;
}

GTotSkeleton expand_g_tot_mixed(int k, int t, const CompositionVector& n) {
  check_composition(k, n);
  if (t < 1 || t > k) throw Error(ErrorKind::Domain, "operator index t out of range");
  GTotSkeleton g = base_skeleton(k, n);
  g.t = t;
  for (int v = t + 1; v <= k; ++v)
    for (int u = 1; u <= t - 1; ++u) {
      for (int s = 1; s <= t - 1; ++s) add_swap(g.s_words, block_word(n, t, s), block_word(n, v, u));
      for (int s = t + 1; s <= k; ++s) add_swap(g.s_words, block_word(n, v, u), block_word(n, s, t));
    }
  for (int p = 1; p <= k; ++p) {
    if (p == t)
      g.ff.push_back(concat(outgoing_word(n, p),
                            with_tags(incoming_word(n, p), Shift::MinusIPi, Boundary::Plus)));
    else
      g.ff.push_back(concat(with_tags(incoming_word(n, p), Shift::PlusIPi, Boundary::Minus),
                            outgoing_word(n, p)));
  }
  return g;
}

}  // namespace shg
