#include "suites.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "shg/combin.hpp"
#include "shg/correlator.hpp"
#include "shg/error.hpp"
#include "shg/kernelalg.hpp"

namespace shg::suites {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void finish(Report& r, const Timer& timer, const Options& o) {
  r.seconds = timer.seconds();
  if (o.runtime_limit > 0.0) r.add("runtime [s]", r.seconds, o.runtime_limit);
}

double rel_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<cplx> random_distinct(std::mt19937_64& rng, int count,
                                  const std::vector<cplx>& avoid) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z(u(rng), u(rng));
    bool ok = true;
    for (const auto& w : out) ok = ok && std::abs(z - w) > 1e-2;
    for (const auto& w : avoid) ok = ok && std::abs(z - w) > 1e-2;
    if (ok) out.push_back(z);
  }
  return out;
}

std::vector<std::vector<int>> increasing_subsets(int n, int p) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != p) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Every composition with entries in {0, 1}.
std::vector<CompositionVector> binary_compositions(int k) {
  const int size = CompositionVector::size_for(k);
  std::vector<CompositionVector> out;
  for (unsigned mask = 0; mask < (1u << size); ++mask) {
    CompositionVector c = make_composition(k);
    for (int i = 0; i < size; ++i) c.n[i] = static_cast<int>(mask >> i & 1u);
    out.push_back(c);
  }
  return out;
}

void pick_levels(const CompositionVector& c, int p, std::vector<LevelPartition>& acc,
                 const std::function<void(const std::vector<LevelPartition>&)>& visit) {
  if (p > c.k - 1) {
    visit(acc);
    return;
  }
  const auto av = level_vector_a(c, p);
  const auto bv = level_vector_b(c, p);
  const int need = static_cast<int>(std::min(av.size(), bv.size()));
  if (need == 0) {
    pick_levels(c, p + 1, acc, visit);
    return;
  }
  for (const auto& ai : increasing_subsets(static_cast<int>(av.size()), need)) {
    for (const auto& bi : arrangements(static_cast<int>(bv.size()), need)) {
      LevelPartition lp;
      lp.p = p;
      for (int i : ai) lp.a1.push_back(av[i]);
      for (int i : bi) lp.b1.push_back(bv[i]);
      acc.push_back(lp);
      pick_levels(c, p + 1, acc, visit);
      acc.pop_back();
    }
  }
}

std::vector<CompositionVector> brute_compositions(int k, const std::vector<int>& r) {
  const int size = CompositionVector::size_for(k);
  const int cap = r.empty() ? 0 : *std::max_element(r.begin(), r.end());
  std::vector<CompositionVector> out;
  CompositionVector c = make_composition(k);
  std::function<void(int)> rec = [&](int i) {
    if (i == size) {
      if (satisfies_truncation(c, r)) out.push_back(c);
      return;
    }
    for (int v = 0; v <= cap; ++v) {
      c.n[i] = v;
      rec(i + 1);
    }
    c.n[i] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const CompositionVector& x, const CompositionVector& y) { return x.n < y.n; });
  return out;
}

CorrelatorRequest three_point(const Options& o) {
  CorrelatorRequest q;
  q.params = make_model(0.3);
  q.k = 3;
  const auto op = make_ktransform_operator(q.params, 1.7, 0, "phi");
  q.operators = {op, op, op};
  q.points = {{0.1, 1.2}, {0.0, 0.0}, {-0.15, -1.1}};
  q.r = {1, 1};
  q.quad.threads = o.threads;
  return q;
}

CorrelatorRequest two_point(const Options& o, double rho, int r) {
  CorrelatorRequest q;
  q.params = make_model(0.3);
  q.k = 2;
  q.operators = {make_unit_operator(), make_unit_operator()};
  q.points = {{0.0, rho}, {0.0, 0.0}};
  q.r = {r};
  q.quad.threads = o.threads;
  return q;
}

template <class F>
void guarded(Report& rep, const std::string& label, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rep.fail(label, e.what());
  }
}

}  // namespace

void Report::add(const std::string& label, double value, double limit) {
  checks.push_back({label, value, limit, value < limit});
}

void Report::fail(const std::string& label, const std::string& why) {
  checks.push_back({label, kInf, 0.0, false});
  notes.push_back(label + ": " + why);
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* Report::worst() const {
  const Check* w = nullptr;
  double ratio = -1.0;
  for (const auto& c : checks) {
    const double q = c.passed ? c.value / c.limit : kInf;
    if (!w || q > ratio || (!c.passed && w->passed)) {
      w = &c;
      ratio = q;
    }
  }
  return w;
}

std::vector<cplx> barnes_grid(Grid grid) {
  const int nr = grid == Grid::Fine ? 80 : 12;
  const int na = grid == Grid::Fine ? 73 : 13;
  std::vector<cplx> out;
  for (int i = 0; i < nr; ++i) {
    const double r = 0.5 * std::pow(80.0, static_cast<double>(i) / (nr - 1));
    for (int j = 0; j < na; ++j) {
      const double phi = -0.75 * kPi + 1.5 * kPi * j / (na - 1);
      out.push_back(std::polar(r, phi));
    }
  }
  return out;
}

double barnes_funceq_residual(cplx z) {
  return std::abs(std::exp(log_barnes_g(z + 1.0) - log_barnes_g(z) - log_gamma(z)) - 1.0);
}

Report smatrix(const Options& o) {
  Timer timer;
  Report rep{"S-matrix"};
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> re(-6.0, 6.0);
  std::uniform_real_distribution<double> im(0.0, kPi);
  std::uniform_real_distribution<double> coupling(0.02, 0.48);
  double unit = 0.0;
  double cross = 0.0;
  double at_zero = 0.0;
  const int samples = o.quick ? 200 : 1000;
  for (int s = 0; s < samples; ++s) {
    const auto p = make_model(coupling(rng));
    const cplx beta(re(rng), im(rng));
    unit = std::max(unit, std::abs(s_matrix(beta, p) * s_matrix(-beta, p) - 1.0));
    cross = std::max(cross, rel_gap(s_matrix(cplx(0.0, kPi) - beta, p), s_matrix(beta, p)));
    at_zero = std::max(at_zero, std::abs(s_matrix(0.0, p) + 1.0));
  }
  rep.add("unitarity S(b)S(-b) = 1", unit, 1e-12);
  rep.add("crossing S(i pi - b) = S(b)", cross, 1e-12);
  rep.add("|S(0) + 1|", at_zero, 4.0 * std::numeric_limits<double>::epsilon());
  finish(rep, timer, o);
  return rep;
}

Report barnes(const Options& o) {
  Timer timer;
  Report rep{"Barnes G"};
  double worst = 0.0;
  for (const auto& z : barnes_grid(o.quick ? Grid::Coarse : Grid::Fine))
    worst = std::max(worst, barnes_funceq_residual(z));
  rep.add("G(z+1) = Gamma(z) G(z) on grid", worst, 1e-10);
  rep.add("|G(1) - 1|", std::abs(std::exp(log_barnes_g(1.0)) - 1.0), 1e-12);
  rep.add("|G(2) - 1|", std::abs(std::exp(log_barnes_g(2.0)) - 1.0), 1e-12);
  finish(rep, timer, o);
  return rep;
}

Report min_form_factor(const Options& o) {
  Timer timer;
  Report rep{"minimal form factor"};
  const auto p = make_model(0.3);
  rep.add("|F(0)|", std::abs(shg::min_form_factor(0.0, p)), 1e-12);
  const double d30 = std::abs(shg::min_form_factor(30.0, p) - 1.0);
  const double d60 = std::abs(shg::min_form_factor(60.0, p) - 1.0);
  rep.add("|F(30) - 1|", d30, 0.1);
  // 1/gamma scaling: the ratio should lie within a factor 2 of 2.
  const double ratio = d60 > 0.0 ? d30 / d60 : kInf;
  rep.add("|log2((F(30)-1)/(F(60)-1)) - 1|", std::abs(std::log2(ratio) - 1.0), 1.0);
  char note[96];
  std::snprintf(note, sizeof note, "|F(30)-1| = %.3e, |F(60)-1| = %.3e", d30, d60);
  rep.notes.push_back(note);
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  double watson = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double beta = u(rng);
    watson = std::max(watson, rel_gap(shg::min_form_factor(beta, p) /
                                          shg::min_form_factor(-beta, p),
                                      s_matrix(beta, p)));
  }
  rep.add("Watson F(b)/F(-b) = S(b)", watson, 1e-9);
  finish(rep, timer, o);
  return rep;
}

Report cauchy(const Options& o) {
  Timer timer;
  Report rep{"Cauchy decomposition"};
  std::mt19937_64 rng(303);
  const int samples = o.quick ? 20 : 100;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      double worst = 0.0;
      for (int s = 0; s < samples; ++s) {
        const auto a = random_distinct(rng, m, {});
        const auto b = random_distinct(rng, n, a);
        cplx sum = 0.0;
        for (const auto& t : cauchy_decomposition(a, b)) sum += t.value;
        const cplx lhs = cauchy_lhs(a, b);
        worst = std::max(worst, std::abs(sum - lhs) / std::abs(lhs));
      }
      rep.add("(M,N)=(" + std::to_string(m) + "," + std::to_string(n) + ") relative", worst,
              1e-10);
    }
  finish(rep, timer, o);
  return rep;
}

Report chains(const Options& o) {
  Timer timer;
  Report rep{"chain decomposition"};
  int configs = 0;
  int multiset_bad = 0;
  int overlap_bad = 0;
  int cover_bad = 0;
  for (int k = 2; k <= (o.quick ? 3 : 4); ++k) {
    for (const auto& c : binary_compositions(k)) {
      std::vector<LevelPartition> acc;
      pick_levels(c, 2, acc, [&](const std::vector<LevelPartition>& levels) {
        ++configs;
        const auto chain_list = chain_decomposition(c, levels);
        auto expected = level_pole_factors(levels);
        std::vector<PoleFactor> got;
        std::set<BlockVar> seen;
        bool overlap = false;
        for (const auto& ch : chain_list) {
          const auto f = ch.factors();
          got.insert(got.end(), f.begin(), f.end());
          for (const auto& v : ch.variables()) overlap = !seen.insert(v).second || overlap;
        }
        std::sort(expected.begin(), expected.end());
        std::sort(got.begin(), got.end());
        if (!(expected == got)) ++multiset_bad;
        if (overlap) ++overlap_bad;
        std::set<BlockVar> paired;
        for (const auto& f : expected) {
          paired.insert(f.x);
          paired.insert(f.y);
        }
        if (paired != seen) ++cover_bad;
      });
    }
  }
  rep.add("factor multiset mismatches", multiset_bad, 0.5);
  rep.add("chains sharing a variable", overlap_bad, 0.5);
  rep.add("chain variables != paired variables", cover_bad, 0.5);
  rep.notes.push_back(std::to_string(configs) + " admissible partitions");
  finish(rep, timer, o);
  return rep;
}

Report compositions(const Options& o) {
  Timer timer;
  Report rep{"composition enumeration"};
  int cases = 0;
  int bad = 0;
  const int rmax = o.quick ? 2 : 3;
  for (int k = 2; k <= 4; ++k) {
    std::vector<int> r(k - 1, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == k - 1) {
        ++cases;
        const auto got = enumerate_compositions(k, r);
        const auto want = brute_compositions(k, r);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i].n == want[i].n;
        if (!same) ++bad;
        return;
      }
      for (int v = 0; v <= rmax; ++v) {
        r[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  rep.add("mismatching truncation vectors", bad, 0.5);
  rep.notes.push_back(std::to_string(cases) + " truncation vectors");
  finish(rep, timer, o);
  return rep;
}

namespace {

struct AxiomTarget {
  std::string label;
  OperatorSpec op;
  ModelParams params;
  bool residue = true;
};

std::vector<AxiomTarget> shipped_fixtures() {
  std::vector<AxiomTarget> out;
  for (double b : {0.0, 0.3}) {
    const auto p = make_model(b);
    for (int d : {0, 1}) {
      const std::string label = "k-transform b=" + std::to_string(b).substr(0, 3) +
                                " degree " + std::to_string(d);
      out.push_back({label, make_ktransform_operator(p, 1.7, d), p, true});
    }
  }
  const auto p = make_model(0.3);
  OperatorSpec ex{"exp-like", 0.0, 0.0, 0.0,
                  std::make_shared<ExponentialLikeProvider>(
                      p, std::vector<cplx>{1.0, 0.5, 0.25, 0.125, 0.0625}, 0.0, true)};
  out.push_back({"exponential-like fixture", ex, p, false});
  return out;
}

}  // namespace

Report axioms(const Options& o, const std::vector<OperatorSpec>& ops, const ModelParams* params) {
  Timer timer;
  Report rep{"bootstrap axioms"};
  std::vector<AxiomTarget> targets;
  if (ops.empty()) {
    targets = shipped_fixtures();
  } else {
    for (const auto& op : ops)
      targets.push_back({op.name, op, *params, op.provider->kind() == "k-transform"});
  }
  for (const auto& t : targets) {
    AxiomReport worst;
    AxiomOptions ao;
    ao.samples = o.quick ? 4 : 20;
    ao.check_residue = t.residue;
    guarded(rep, t.label, [&] {
      const int nmax = std::min(3, t.op.provider->max_n());
      for (int n = 1; n <= nmax; ++n) {
        ao.seed = 12345u + static_cast<unsigned>(n);
        const auto r = verify_axioms(t.op, t.params, n, ao);
        worst.exchange = std::max(worst.exchange, r.exchange);
        worst.cyclic = std::max(worst.cyclic, r.cyclic);
        worst.residue = std::max(worst.residue, r.residue);
        worst.boost = std::max(worst.boost, r.boost);
      }
      rep.add(t.label + " I exchange", worst.exchange, 1e-8);
      rep.add(t.label + " II cyclic", worst.cyclic, 1e-8);
      if (t.residue) rep.add(t.label + " III residue", worst.residue, 1e-6);
      rep.add(t.label + " IV boost", worst.boost, 1e-10);
    });
  }
  finish(rep, timer, o);
  return rep;
}

Report kernels(const Options& o) {
  Timer timer;
  Report rep{"kernel equivalences"};
  struct Size {
    int n, m;
  };
  const std::vector<double> alpha_all{0.3, -0.45};
  auto test_for = [](int m) {
    GaussianTest g;
    for (int j = 0; j < m; ++j) {
      g.center.push_back(0.1 - 0.3 * j);
      g.width.push_back(1.0 + 0.2 * j);
    }
    return g;
  };
  auto run = [&](double b, const std::vector<Size>& sizes) {
    const auto params = make_model(b);
    const auto op = make_ktransform_operator(params, 1.7, 1);
    for (const auto [n, m] : sizes) {
      const std::string tag = "b=" + std::to_string(b).substr(0, 3) + " (" + std::to_string(n) +
                              "," + std::to_string(m) + ")";
      guarded(rep, tag, [&] {
        const std::vector<double> alpha(alpha_all.begin(), alpha_all.begin() + n);
        const auto g = test_for(m);
        const cplx direct = pair_numeric(expand_direct(n, m), alpha, g, op, params).value;
        double spread = std::abs(pair_numeric(expand_dual(n, m), alpha, g, op, params).value -
                                 direct);
        for (const auto& a1 : [&] {
               std::vector<std::vector<int>> all;
               for (int p = 0; p <= n; ++p)
                 for (const auto& s : increasing_subsets(n, p)) all.push_back(s);
               return all;
             }())
          spread = std::max(
              spread,
              std::abs(pair_numeric(expand_mixed(n, m, a1), alpha, g, op, params).value - direct));
        rep.add(tag + " direct/dual/mixed spread", spread, 1e-6);
        if (n == 2 && b != 0.0) {
          const std::vector<double> swapped{alpha[1], alpha[0]};
          const cplx q = pair_numeric(expand_direct(n, m), swapped, g, op, params).value;
          const cplx s = s_matrix(swapped[1] - swapped[0], params);
          rep.add(tag + " exchange covariance", std::abs(q - s * direct) / std::abs(direct),
                  1e-8);
        }
      });
    }
  };
  if (o.quick) {
    run(0.3, {{1, 1}, {1, 2}, {2, 1}});
  } else {
    run(0.3, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    run(0.0, {{1, 1}, {1, 2}, {2, 1}});
  }
  finish(rep, timer, o);
  return rep;
}

Report bessel(const Options& o) {
  Timer timer;
  Report rep{"two-point Bessel oracle"};
  for (double rho : {0.5, 1.0, 2.0}) {
    const double k0 = std::cyl_bessel_k(0.0, rho);
    const std::string tag = "rho=" + std::to_string(rho).substr(0, 3);
    guarded(rep, tag, [&] {
      const auto w1 = compute_W_r(two_point(o, rho, 1));
      rep.add(tag + " r=(1) vs K0/pi", std::abs(w1.total - k0 / kPi), 1e-8);
      if (!o.quick || rho == 1.0) {
        const auto w2 = compute_W_r(two_point(o, rho, 2));
        rep.add(tag + " r=(2) vs K0^2/(2 pi^2)", std::abs(w2.total - k0 * k0 / (2 * kPi * kPi)),
                1e-7);
      }
    });
  }
  finish(rep, timer, o);
  return rep;
}

Report contours(const Options& o) {
  Timer timer;
  Report rep{"contour-ladder invariance"};
  auto q = three_point(o);
  std::mt19937 rng(7);
  for (const auto& n : enumerate_compositions(3, q.r)) {
    const std::string tag = "n=" + n.to_string();
    guarded(rep, tag, [&] {
      q.ladder.reset();
      const cplx base = compute_I_n(q, n).value;
      double worst = 0.0;
      for (int i = 0; i < (o.quick ? 2 : 5); ++i) {
        q.ladder = random_ladder(3, n, q.params, rng);
        worst = std::max(worst, std::abs(compute_I_n(q, n).value - base));
      }
      rep.add(tag + " ladder variation", worst, 1e-8);
    });
  }
  finish(rep, timer, o);
  return rep;
}

Report representation(const Options& o) {
  Timer timer;
  Report rep{"representation cross-check"};
  const auto q = three_point(o);
  guarded(rep, "standard", [&] {
    const cplx w = compute_W_r(q).total;
    for (int t = 1; t <= 3; ++t) {
      if (o.quick && t != 2) continue;
      const std::string tag = "t=" + std::to_string(t);
      guarded(rep, tag, [&] {
        rep.add(tag + " |W - W^(t)|", std::abs(compute_W_r_mixed(q, t).total - w), 1e-6);
      });
    }
  });
  finish(rep, timer, o);
  return rep;
}

Report symmetry(const Options& o) {
  Timer timer;
  Report rep{"symmetries"};
  auto q = three_point(o);
  if (o.quick) {
    q.k = 2;
    q.operators.resize(2);
    q.points = {{0.1, 1.2}, {0.0, 0.0}};
    q.r = {1};
  }
  guarded(rep, "base", [&] {
    const cplx w = compute_W_r(q).total;
    auto shifted = q;
    for (auto& x : shifted.points) {
      x.x0 += 0.37;
      x.x1 -= 1.3;
    }
    rep.add("translation", std::abs(compute_W_r(shifted).total - w), 1e-10);
    double boost = 0.0;
    for (double th : {-0.5, 0.3, 0.5}) {
      auto boosted = q;
      for (auto& x : boosted.points)
        x = {std::cosh(th) * x.x0 + std::sinh(th) * x.x1,
             std::sinh(th) * x.x0 + std::cosh(th) * x.x1};
      boost = std::max(boost, std::abs(compute_W_r(boosted).total - w));
    }
    rep.add("boost (scalar operators)", boost, 1e-7);
  });
  finish(rep, timer, o);
  return rep;
}

}  // namespace shg::suites
