#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "shg/error.hpp"
#include "shg/kernelalg.hpp"

using namespace shg;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

long long choose(int n, int p) {
  long long r = 1;
  for (int i = 0; i < p; ++i) r = r * (n - i) / (i + 1);
  return r;
}

long long falling(int m, int p) {
  long long r = 1;
  for (int i = 0; i < p; ++i) r *= m - i;
  return r;
}

std::vector<std::vector<int>> subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

GaussianTest gaussian(int m) {
  GaussianTest g;
  for (int j = 0; j < m; ++j) {
    g.center.push_back(0.1 - 0.3 * j);
    g.width.push_back(1.0 + 0.2 * j);
  }
  return g;
}

std::multiset<std::pair<std::size_t, std::size_t>> shapes(const FormalKernelSum& s) {
  std::multiset<std::pair<std::size_t, std::size_t>> out;
  for (const auto& t : s.terms) out.insert({t.dirac.size(), t.ff.size()});
  return out;
}

std::set<std::pair<int, int>> crossed_blocks(const GTotSkeleton& g) {
  std::set<std::pair<int, int>> out;
  for (const auto& w : g.s_words)
    for (const auto& [u, v] : inversion_pairs(w.from, w.to))
      out.insert({std::max(u.block, v.block), std::min(u.block, v.block)});
  return out;
}

}  // namespace

TEST_CASE("direct expansion examples") {
  const auto d02 = expand_direct(0, 2);
  REQUIRE(d02.terms.size() == 1);
  CHECK(d02.terms[0].dirac.empty());
  CHECK(d02.terms[0].ff.size() == 2);

  const auto d11 = expand_direct(1, 1);
  REQUIRE(d11.terms.size() == 2);
  CHECK(shapes(d11) == std::multiset<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 0}});
  for (const auto& t : d11.terms) {
    CHECK(t.phase_exponent == 1);
    if (t.dirac.empty()) {
      CHECK(t.ff[0].block == kAlphaBlock);
      CHECK(t.ff[0].shift == Shift::PlusIPi);
      CHECK(t.ff[0].boundary == Boundary::Minus);
      CHECK(t.ff[1].block == kBetaBlock);
    }
  }
  CHECK(expand_direct(2, 2).terms.size() == 7);
}

TEST_CASE("dual expansion examples") {
  const auto d02 = expand_dual(0, 2);
  REQUIRE(d02.terms.size() == 1);
  CHECK(d02.terms[0].ff.size() == 2);
  CHECK(d02.terms[0].dirac.empty());
  const auto d11 = expand_dual(1, 1);
  REQUIRE(d11.terms.size() == 2);
  for (const auto& t : d11.terms) {
    CHECK(t.phase_exponent == 0);
    if (t.dirac.empty()) {
      CHECK(t.ff[1].block == kAlphaBlock);
      CHECK(t.ff[1].shift == Shift::MinusIPi);
      CHECK(t.ff[1].boundary == Boundary::Plus);
    }
  }
}

TEST_CASE("term counts match the pairing combinatorics") {
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) {
      long long expect = 0;
      for (int p = 0; p <= std::min(n, m); ++p) expect += choose(n, p) * falling(m, p);
      CAPTURE(n);
      CAPTURE(m);
      CHECK(direct_term_count(n, m) == expect);
      CHECK(static_cast<long long>(expand_direct(n, m).terms.size()) == expect);
      CHECK(static_cast<long long>(expand_dual(n, m).terms.size()) == expect);
    }
}

TEST_CASE("mixed expansion counts and reductions") {
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m)
      for (const auto& a1 : subsets(n)) {
        const int c1 = static_cast<int>(a1.size());
        long long expect = 0;
        for (int c = 0; c <= c1; ++c)
          for (int d = 0; d <= n - c1; ++d)
            if (c + d <= m) expect += choose(c1, c) * choose(n - c1, d) * falling(m, c + d);
        const auto mixed = expand_mixed(n, m, a1);
        CHECK(mixed_term_count(n, m, c1) == expect);
        CHECK(static_cast<long long>(mixed.terms.size()) == expect);
        for (const auto& t : mixed.terms) CHECK(term_well_formed(t, n, m));
      }
  std::vector<int> all{0, 1};
  CHECK(shapes(expand_mixed(2, 2, all)) == shapes(expand_direct(2, 2)));
  CHECK(shapes(expand_mixed(1, 1, {})) == shapes(expand_dual(1, 1)));
  CHECK(expand_mixed(1, 1, {}).terms.size() == 2);
}

TEST_CASE("slot conservation") {
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) {
      for (const auto& t : expand_direct(n, m).terms) CHECK(term_well_formed(t, n, m));
      for (const auto& t : expand_dual(n, m).terms) CHECK(term_well_formed(t, n, m));
    }
}

TEST_CASE("jump terms") {
  const auto j1 = jump_terms(1);
  REQUIRE(j1.size() == 2);
  CHECK(j1[0].phase_exponent - j1[1].phase_exponent == 1);
  CHECK(j1[0].sign == -j1[1].sign);
  CHECK(jump_terms(2).size() == 4);

  const auto params = make_model(0.3);
  const FormalKernelSum sum{1, 1, KernelFlavor::Jump, {}, j1};
  const auto g = gaussian(1);
  const double alpha = 0.3;
  const cplx at_alpha = g({alpha});
  for (double omega : {0.0, 0.25}) {
    auto op = make_ktransform_operator(params, 1.7, 0);
    op.omega = omega;
    const cplx expect = at_alpha * (1.0 - std::exp(cplx(0.0, 2.0 * kPi * omega)));
    CHECK(std::abs(pair_numeric(sum, {alpha}, g, op, params).value - expect) < 1e-10);
  }
}

TEST_CASE("pairing of a single form factor against a closed form") {
  const auto params = make_model(0.3);
  const double q = 1.7;
  const auto op = make_ktransform_operator(params, q, 1);
  const auto g = gaussian(1);
  const double c = g.center[0], w = g.width[0];
  // F_1 = (q - 1/q) e^beta; Gaussian moment in closed form.
  const cplx expect =
      (q - 1.0 / q) * std::sqrt(2.0 * kPi) * w * std::exp(c + 0.5 * w * w) / (2.0 * kPi);
  const auto got = pair_numeric(expand_direct(0, 1), {}, g, op, params);
  CHECK(std::abs(got.value - expect) < 1e-10);
}

TEST_CASE("direct and dual kernels agree for one alpha and one beta") {
  for (double b : {0.3, 0.0}) {
    CAPTURE(b);
    const auto params = make_model(b);
    const auto op = make_ktransform_operator(params, 1.7, 1);
    const auto g = gaussian(1);
    const cplx direct = pair_numeric(expand_direct(1, 1), {0.3}, g, op, params).value;
    const cplx dual = pair_numeric(expand_dual(1, 1), {0.3}, g, op, params).value;
    const cplx mixed = pair_numeric(expand_mixed(1, 1, {}), {0.3}, g, op, params).value;
    CHECK(std::abs(direct - dual) < 1e-6);
    CHECK(std::abs(direct - mixed) < 1e-6);
  }
}

TEST_CASE("exchange covariance of the direct kernel") {
  const auto params = make_model(0.3);
  const auto op = make_ktransform_operator(params, 1.7, 1);
  const auto g = gaussian(1);
  const std::vector<double> alpha{0.3, -0.45}, swapped{-0.45, 0.3};
  const cplx p = pair_numeric(expand_direct(2, 1), alpha, g, op, params).value;
  const cplx q = pair_numeric(expand_direct(2, 1), swapped, g, op, params).value;
  CHECK(std::abs(q - s_matrix(swapped[1] - swapped[0], params) * p) / std::abs(p) < 1e-8);
}

TEST_CASE("G_tot skeleton examples") {
  const auto g2 = expand_g_tot(2, CompositionVector{2, {1}});
  CHECK(g2.s_words.empty());
  REQUIRE(g2.ff.size() == 2);
  REQUIRE(g2.ff[0].size() == 1);
  REQUIRE(g2.ff[1].size() == 1);
  CHECK(g2.ff[0][0].shift == Shift::None);
  CHECK(g2.ff[1][0].shift == Shift::PlusIPi);
  CHECK(g2.ff[1][0].same_variable(g2.ff[0][0]));

  for (const auto& n : enumerate_compositions(3, {2, 2})) {
    const auto g3 = expand_g_tot(3, n);
    CHECK(crossed_blocks(g3).empty());
  }

  const auto g4 = expand_g_tot(4, CompositionVector{4, {1, 1, 1, 1, 1, 1}});
  CHECK(crossed_blocks(g4) == std::set<std::pair<int, int>>{{block_id(4, 2), block_id(3, 1)}});
  CHECK(g4.blocks.size() == 6);
}

TEST_CASE("mixed G_tot skeleton examples") {
  const auto g2 = expand_g_tot_mixed(2, 2, CompositionVector{2, {1}});
  REQUIRE(g2.ff.size() == 2);
  CHECK(g2.ff[1][0].shift == Shift::MinusIPi);
  CHECK(g2.ff[1][0].boundary == Boundary::Plus);

  // Operator 3 is untouched by the only block, so both skeletons coincide.
  const CompositionVector only21{3, {1, 0, 0}};
  CHECK(expand_g_tot_mixed(3, 3, only21).to_json()["ff"] ==
        expand_g_tot(3, only21).to_json()["ff"]);

  const auto g3 = expand_g_tot_mixed(3, 2, CompositionVector{3, {1, 1, 1}});
  const auto crossed = crossed_blocks(g3);
  CHECK(crossed.count({block_id(3, 1), block_id(2, 1)}) == 1);
  CHECK(kind_of([] { expand_g_tot_mixed(3, 4, CompositionVector{3, {1, 1, 1}}); }) ==
        ErrorKind::Domain);
}

TEST_CASE("S-word value ignores the order inside a block") {
  const auto params = make_model(0.3);
  const CompositionVector n{4, {0, 2, 0, 0, 2, 0}};
  REQUIRE(n.at(4, 2) == 2);
  const auto g = expand_g_tot(4, n);
  REQUIRE_FALSE(g.s_words.empty());
  auto total = [&](bool swap) {
    const std::vector<double> v42{0.4, -1.1}, v31{0.7, 0.2};
    SlotValues values = [&](const Slot& s) -> cplx {
      const int i = swap ? 1 - s.index : s.index;
      return s.block == block_id(4, 2) ? v42[i] : v31[s.index];
    };
    cplx prod = 1.0;
    for (const auto& w : g.s_words) prod *= s_product(w.from, w.to, values, params);
    return prod;
  };
  CHECK(std::abs(total(false) - total(true)) < 1e-13);
  CHECK(std::abs(total(false) - 1.0) > 1e-3);
}

TEST_CASE("formal sums serialize") {
  const auto doc = expand_mixed(2, 1, {1}).to_json();
  CHECK(doc["flavor"] == "mixed");
  CHECK(doc["a1"] == nlohmann::json::array({1}));
  CHECK(doc["terms"].size() == static_cast<std::size_t>(mixed_term_count(2, 1, 1)));
  CHECK(expand_g_tot(3, CompositionVector{3, {1, 1, 1}}).to_json()["k"] == 3);
}

TEST_CASE("size limits") {
  CHECK(kind_of([] { expand_direct(kMaxKernelSize + 1, 1); }) == ErrorKind::Domain);
  CHECK(kind_of([] { expand_dual(1, -1); }) == ErrorKind::Domain);
  CHECK(kind_of([] { expand_mixed(2, 1, {2}); }) == ErrorKind::Domain);
}
