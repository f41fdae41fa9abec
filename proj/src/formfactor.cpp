#include "shg/formfactor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "shg/error.hpp"

namespace shg {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double coupling_sine(const ModelParams& params) {
  if (params.b == 0.0 || params.b_hat == 0.0) return 0.0;
  return std::sin(2.0 * kPi * params.b);
}

double relative_gap(cplx x, cplx y, double scale = 0.0) {
  const double den = std::max({std::abs(x), std::abs(y), scale});
  if (den == 0.0) return 0.0;
  return std::abs(x - y) / den;
}

std::vector<int> ell_from_mask(unsigned mask, std::size_t n) {
  std::vector<int> ell(n);
  for (std::size_t k = 0; k < n; ++k) ell[k] = (mask >> k) & 1u;
  return ell;
}

cplx json_complex(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw Error(ErrorKind::Config, "expected a number or a [re, im] pair");
}

}  // namespace

cplx OperatorSpec::form_factor(const std::vector<cplx>& beta) const {
  if (!provider) throw Error(ErrorKind::Config, "operator '" + name + "' has no provider");
  if (static_cast<int>(beta.size()) > provider->max_n())
    throw Error(ErrorKind::Domain, "operator '" + name + "': particle number above provider limit");
  return provider->evaluate(beta);
}

cplx g01_constant(const ModelParams& params) {
  const double sb = coupling_sine(params);
  if (sb == 0.0) return 1.0;
  return -1.0 / (sb * min_form_factor(cplx(0.0, kPi), params));
}

ExponentialPn::ExponentialPn(const ModelParams& params, double q, int degree)
    : q_(q), degree_(degree), g01_(g01_constant(params)) {
  if (!(q > 0.0)) throw Error(ErrorKind::Config, "exponential p_n family: q must be positive");
  if (degree != 0 && degree != 1)
    throw Error(ErrorKind::Config, "exponential p_n family: degree must be 0 or 1");
}

cplx ExponentialPn::normalization(int n) const {
  cplx v = 1.0;
  for (int i = 0; i < n / 2; ++i) v *= g01_;
  return v;
}

cplx ExponentialPn::evaluate(const std::vector<cplx>& beta, const std::vector<int>& ell) const {
  cplx v = normalization(static_cast<int>(beta.size()));
  for (int l : ell) v *= l ? 1.0 / q_ : q_;
  if (degree_ == 1) {
    cplx s = 0.0;
    for (const auto& b : beta) s += std::exp(b);
    v *= s;
  }
  return v;
}

cplx k_transform(const PnSolution& p, const std::vector<cplx>& beta,
                 const ModelParams& params) {
  const std::size_t n = beta.size();
  const double sb = coupling_sine(params);
  cplx total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const auto ell = ell_from_mask(mask, n);
    cplx term = (std::popcount(mask) % 2) ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t s = k + 1; s < n; ++s) {
        const int lks = ell[k] - ell[s];
        if (lks == 0 || sb == 0.0) continue;
        const cplx sh = std::sinh(beta[k] - beta[s]);
        if (std::abs(sh) < 1e-14)
          throw Error(ErrorKind::Coincidence, "k_transform: coincident rapidities");
        term *= 1.0 - kI * static_cast<double>(lks) * sb / sh;
      }
    total += term * p.evaluate(beta, ell);
  }
  return total;
}

cplx build_form_factor(const PnSolution& p, const std::vector<cplx>& beta,
                       const ModelParams& params) {
  cplx prod = 1.0;
  for (std::size_t a = 0; a < beta.size(); ++a)
    for (std::size_t b = a + 1; b < beta.size(); ++b)
      prod *= min_form_factor(beta[a] - beta[b], params);
  return prod * k_transform(p, beta, params);
}

ExponentialLikeProvider::ExponentialLikeProvider(const ModelParams& params,
                                                 std::vector<cplx> amplitudes, double weight,
                                                 bool include_minimal)
    : params_(params),
      amplitudes_(std::move(amplitudes)),
      weight_(weight),
      include_minimal_(include_minimal) {
  if (amplitudes_.empty())
    throw Error(ErrorKind::Config, "exponential-like provider needs at least one amplitude");
}

cplx ExponentialLikeProvider::evaluate(const std::vector<cplx>& beta) const {
  if (beta.size() >= amplitudes_.size())
    throw Error(ErrorKind::Domain, "exponential-like provider: no amplitude for this n");
  cplx sum = 0.0;
  for (const auto& b : beta) sum += b;
  cplx v = amplitudes_[beta.size()] * std::exp(weight_ * sum);
  if (include_minimal_)
    for (std::size_t a = 0; a < beta.size(); ++a)
      for (std::size_t b = a + 1; b < beta.size(); ++b)
        v *= min_form_factor(beta[a] - beta[b], params_);
  return v;
}

KTransformProvider::KTransformProvider(const ModelParams& params,
                                       std::shared_ptr<const PnSolution> p)
    : params_(params), p_(std::move(p)) {
  if (!p_) throw Error(ErrorKind::Config, "k-transform provider needs a p_n family");
}

cplx KTransformProvider::evaluate(const std::vector<cplx>& beta) const {
  const std::size_t n = beta.size();
  const double sb = coupling_sine(params_);
  const std::size_t npairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::vector<cplx> f(npairs, 1.0), fs(npairs, 0.0);
  std::size_t idx = 0;
  if (sb != 0.0) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t s = k + 1; s < n; ++s, ++idx) {
        const auto pair = min_form_factor_pair(beta[k] - beta[s], params_);
        f[idx] = pair.f;
        fs[idx] = kI * sb * pair.f_over_sinh;
      }
  }
  std::vector<int> ell(n, 0);
  cplx total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (std::size_t k = 0; k < n; ++k) ell[k] = (mask >> k) & 1u;
    cplx term = (std::popcount(mask) % 2) ? -1.0 : 1.0;
    idx = 0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t s = k + 1; s < n; ++s, ++idx)
        term *= f[idx] - static_cast<double>(ell[k] - ell[s]) * fs[idx];
    total += term * p_->evaluate(beta, ell);
  }
  return total;
}

OperatorSpec make_unit_operator(const std::string& name) {
  return OperatorSpec{name, 0.0, 0.0, 0.0, std::make_shared<UnitProvider>()};
}

OperatorSpec make_ktransform_operator(const ModelParams& params, double q, int degree,
                                      const std::string& name) {
  auto pn = std::make_shared<ExponentialPn>(params, q, degree);
  return OperatorSpec{name, 0.0, pn->spin(), pn->growth(),
                      std::make_shared<KTransformProvider>(params, pn)};
}

OperatorSpec operator_from_json(const nlohmann::json& doc, const ModelParams& params) {
  try {
    OperatorSpec op;
    op.name = doc.value("name", std::string("O"));
    const auto& prov = doc.at("provider");
    const std::string kind = prov.at("kind").get<std::string>();
    if (kind == "unit") {
      op.provider = std::make_shared<UnitProvider>();
    } else if (kind == "k-transform") {
      const std::string family = prov.value("family", std::string("exponential"));
      if (family != "exponential")
        throw Error(ErrorKind::Config, "unknown p_n family '" + family + "'");
      auto pn = std::make_shared<ExponentialPn>(params, prov.value("q", 1.5),
                                                prov.value("degree", 0));
      op.spin = pn->spin();
      op.growth = pn->growth();
      op.provider = std::make_shared<KTransformProvider>(params, pn);
    } else if (kind == "exponential-like") {
      std::vector<cplx> amps;
      for (const auto& a : prov.at("amplitudes")) amps.push_back(json_complex(a));
      const double weight = prov.value("weight", 0.0);
      op.spin = weight;
      op.growth = std::abs(weight);
      op.provider = std::make_shared<ExponentialLikeProvider>(
          params, std::move(amps), weight, prov.value("include_minimal", true));
    } else {
      throw Error(ErrorKind::Config, "unknown provider kind '" + kind + "'");
    }
    op.omega = doc.value("omega", op.omega);
    op.spin = doc.value("spin", op.spin);
    op.growth = doc.value("growth", op.growth);
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("operator definition: ") + e.what());
  }
}

ResidueEstimate kinematic_residue(const OperatorSpec& op, cplx beta,
                                  const std::vector<cplx>& rest, double radius, int nodes) {
  auto circle = [&](double r) {
    cplx sum = 0.0;
    std::vector<cplx> args;
    for (int j = 0; j < nodes; ++j) {
      const cplx e = std::polar(1.0, 2.0 * kPi * j / nodes);
      args.assign({beta + r * e + cplx(0.0, kPi), beta});
      args.insert(args.end(), rest.begin(), rest.end());
      sum += op.form_factor(args) * r * e;
    }
    return sum / static_cast<double>(nodes);
  };
  const cplx r1 = circle(radius);
  const cplx r2 = circle(0.5 * radius);
  const double ratio = std::pow(2.0, nodes);
  const cplx res = r2 + (r2 - r1) / (ratio - 1.0);
  return {-kI * res, std::abs(r1 - r2)};
}

AxiomReport verify_axioms(const OperatorSpec& op, const ModelParams& params, int n,
                          const AxiomOptions& options) {
  AxiomReport report;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> rap(-2.0, 2.0);
  std::uniform_real_distribution<double> boost(-1.0, 1.0);
  auto sample = [&](int count) {
    std::vector<cplx> v(count);
    for (auto& x : v) x = rap(rng);
    return v;
  };
  const cplx phase = std::exp(2.0 * kPi * kI * op.omega);
  for (int s = 0; s < options.samples; ++s) {
    const auto beta = sample(n);
    if (n >= 1) {
      const cplx base = op.form_factor(beta);
      for (int i = 0; i + 1 < n; ++i) {
        auto swapped = beta;
        std::swap(swapped[i], swapped[i + 1]);
        const cplx rhs = s_matrix(beta[i] - beta[i + 1], params) * op.form_factor(swapped);
        report.exchange = std::max(report.exchange, relative_gap(base, rhs));
      }
      auto shifted = beta;
      shifted[0] += cplx(0.0, 2.0 * kPi);
      std::vector<cplx> cycled(beta.begin() + 1, beta.end());
      cycled.push_back(beta[0]);
      report.cyclic = std::max(report.cyclic, relative_gap(op.form_factor(shifted),
                                                          phase * op.form_factor(cycled)));
      const double theta = boost(rng);
      auto boosted = beta;
      for (auto& x : boosted) x += theta;
      report.boost = std::max(report.boost, relative_gap(op.form_factor(boosted),
                                                        std::exp(op.spin * theta) * base));
    }
    if (options.check_residue && n + 2 <= op.provider->max_n()) {
      const cplx b0 = rap(rng);
      const auto rest = sample(n);
      const auto est =
          kinematic_residue(op, b0, rest, options.residue_radius, options.residue_nodes);
      cplx sprod = 1.0;
      for (const auto& x : rest) sprod *= s_matrix(b0 - x, params);
      const cplx fn = op.form_factor(rest);
      const cplx rhs = (1.0 - phase * sprod) * fn;
      // Scale of the pole part sampled on the contour.
      std::vector<cplx> probe{b0 + options.residue_radius + cplx(0.0, kPi), b0};
      probe.insert(probe.end(), rest.begin(), rest.end());
      const double pole_scale = options.residue_radius * std::abs(op.form_factor(probe));
      report.residue = std::max(report.residue,
                                relative_gap(est.value, rhs, std::max(std::abs(fn), pole_scale)));
      report.residue_radius_gap = std::max(report.residue_radius_gap, est.radius_gap);
    }
  }
  return report;
}

RapidityBlocks::RapidityBlocks(const CompositionVector& c) : n(c) {
  values.resize(c.n.size());
  for (int b = 2; b <= c.k; ++b)
    for (int a = 1; a < b; ++a) values[CompositionVector::index(b, a)].assign(c.at(b, a), 0.0);
}

FactorizedForm factorize_regular(const std::vector<OperatorSpec>& ops,
                                 const RapidityBlocks& gamma, int p, double eps) {
  const int k = gamma.n.k;
  if (static_cast<int>(ops.size()) != k || p < 1 || p > k)
    throw Error(ErrorKind::Domain, "factorize_regular: level out of range");
  std::vector<cplx> a, b;
  if (p >= 2)
    for (const auto& v : level_vector_a(gamma.n, p)) a.push_back(gamma.get(v));
  if (p <= k - 1)
    for (const auto& v : level_vector_b(gamma.n, p)) b.push_back(gamma.get(v));

  std::vector<cplx> args;
  for (const auto& x : a) args.push_back(x + cplx(0.0, kPi - eps));
  args.insert(args.end(), b.begin(), b.end());
  const cplx full = ops[p - 1].form_factor(args);
  if (p == 1 || p == k) return {1.0, full, full};

  cplx pref = 1.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t l = 0; l < r; ++l) pref *= a[r] - a[l];
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t l = r + 1; l < b.size(); ++l) pref *= b[r] - b[l];
  if (std::abs(pref) < 1e-9 && !(a.size() < 2 && b.size() < 2))
    throw Error(ErrorKind::Coincidence, "factorize_regular: coincident block entries");
  for (const auto& x : a)
    for (const auto& y : b) {
      const cplx d = x - y - cplx(0.0, eps);
      if (std::abs(d) < 1e-9)
        throw Error(ErrorKind::Coincidence, "factorize_regular: on a pole");
      pref /= d;
    }
  return {pref, full / pref, full};
}

}  // namespace shg
