#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shg/error.hpp"
#include "shg/specfun.hpp"
#include "suites.hpp"

using namespace shg;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

// Reference values from tools/gen_oracles.py (mpmath, 30 digits).

TEST_CASE("log_gamma special values") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-13);
  CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)) < 1e-13);
}

TEST_CASE("log_gamma against the arbitrary-precision oracle") {
  CHECK(rel(log_gamma({5.3, 2.1}), {3.1952750546322029, 3.3607264113948721}) < 1e-12);
  CHECK(rel(log_gamma({-2.5, 0.3}), {-0.43208889261320192, -9.0933454212897415}) < 1e-12);
  CHECK(rel(log_gamma({0.1, -7.0}), {-10.854877044420903, -5.9875701533014403}) < 1e-12);
}

TEST_CASE("log_gamma rejects poles") {
  CHECK(kind_of([] { log_gamma(0.0); }) == ErrorKind::Pole);
  CHECK(kind_of([] { log_gamma(-3.0); }) == ErrorKind::Pole);
}

TEST_CASE("log_barnes_g special values and oracle") {
  CHECK(std::abs(std::exp(log_barnes_g(1.0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::exp(log_barnes_g(2.0)) - 1.0) < 1e-12);
  const std::pair<cplx, cplx> table[] = {
      {{2.5, 0.0}, {0.94757390108382578, 0.0}},
      {{0.5, 1.0}, {1.9314723900518738, 1.5473068986267391}},
      {{10.0, 3.0}, {-245558561029.69482, -727354626.50652825}},
      {{-1.5, 0.5}, {-0.61081455954919374, -0.1881888977444082}},
      {{3.0, -20.0}, {8.3739342648949351e-155, -6.0991128186779444e-155}},
  };
  for (const auto& [z, g] : table) {
    CAPTURE(z);
    CHECK(rel(std::exp(log_barnes_g(z)), g) < 1e-11);
  }
  CHECK(kind_of([] { log_barnes_g(-2.0); }) == ErrorKind::Pole);
}

TEST_CASE("Barnes functional equation") {
  CHECK(suites::barnes_funceq_residual({4.7, -3.2}) < 1e-10);
  double worst = 0.0;
  for (const auto& z : suites::barnes_grid(suites::Grid::Fine))
    worst = std::max(worst, suites::barnes_funceq_residual(z));
  CHECK(worst < 1e-10);
}

TEST_CASE("barnes_ratio_asymptotic") {
  CHECK(std::abs(barnes_ratio_asymptotic({3.0, 40.0}, 0.0) - 1.0) < 1e-15);
  const cplx exact = std::exp(log_barnes_g(52.0) - log_barnes_g(51.0));
  CHECK(rel(barnes_ratio_asymptotic(50.0, 1.0), exact) < 5e-2);
  const cplx z = std::polar(50.0, kPi / 4);
  const cplx ex2 = std::exp(log_barnes_g(1.0 + z + 0.3) - log_barnes_g(1.0 + z));
  CHECK(rel(barnes_ratio_asymptotic(z, 0.3), ex2) < 5e-2);
  CHECK(kind_of([] { barnes_ratio_asymptotic(std::polar(50.0, 3.1), 1.0); }) ==
        ErrorKind::Domain);
}

TEST_CASE("s_matrix examples") {
  for (double b : {0.05, 0.3, 0.45}) CHECK(s_matrix(0.0, make_model(b)) == cplx(-1.0));
  CHECK(s_matrix({0.7, 0.2}, make_model(0.0)) == cplx(1.0));
  const auto p = make_model(0.3);
  const cplx beta(0.7, 0.1);
  CHECK(std::abs(s_matrix(beta, p) * s_matrix(-beta, p) - 1.0) < 1e-12);
  CHECK(std::abs(s_matrix(beta, p) - s_matrix(cplx(0.0, kPi) - beta, p)) < 1e-12);
  CHECK(rel(s_matrix(0.7, p), {-0.22234369120575196, -0.97496834973295478}) < 1e-14);
  CHECK(rel(s_matrix({0.4, 0.3}, p), {-0.36672499051520332, -0.42211502896660008}) < 1e-14);
  CHECK(kind_of([&] { s_matrix(cplx(0.0, -2.0 * kPi * 0.3), p); }) == ErrorKind::Pole);
}

TEST_CASE("s_matrix unitarity and crossing near the real line") {
  const auto p = make_model(0.3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(-0.4, 0.4);
  double unit = 0.0, cross = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cplx beta(re(rng), im(rng));
    unit = std::max(unit, std::abs(s_matrix(beta, p) * s_matrix(-beta, p) - 1.0));
    cross = std::max(cross, std::abs(s_matrix(beta, p) - s_matrix(cplx(0.0, kPi) - beta, p)));
  }
  CHECK(unit < 1e-12);
  CHECK(cross < 1e-12);
}

TEST_CASE("make_model convention and validation") {
  const auto p = make_model(0.3, 2.0);
  CHECK(p.b_hat == doctest::Approx(0.2));
  CHECK(p.mass == 2.0);
  CHECK(kind_of([] { make_model(0.6); }) == ErrorKind::Domain);
  CHECK(kind_of([] { make_model(-0.1); }) == ErrorKind::Domain);
  CHECK(kind_of([] { make_model(0.2, 0.0); }) == ErrorKind::Domain);
}

TEST_CASE("min_form_factor against the oracle") {
  const auto p = make_model(0.3);
  CHECK(min_form_factor(0.0, p) == cplx(0.0));
  const std::pair<cplx, cplx> table[] = {
      {{1.0, 0.0}, {0.73620872596653785, -0.5957925417118401}},
      {{2.5, 0.0}, {1.0813585782841213, -0.16998320065903461}},
      {{0.5, 1.0}, {0.65129466124699812, -0.11809956246136787}},
      {{0.0, kPi}, {0.79647158851608056, 0.0}},
      {{-0.7, 2.0}, {0.77998470182642978, 0.047408339140986723}},
  };
  for (const auto& [beta, f] : table) {
    CAPTURE(beta);
    CHECK(rel(min_form_factor(beta, p), f) < 1e-11);
  }
}

TEST_CASE("min_form_factor asymptotics and Watson relation") {
  const auto p = make_model(0.3);
  CHECK(std::abs(min_form_factor(30.0, p) - 1.0) < 0.1);
  const double d10 = std::abs(min_form_factor(10.0, p) - 1.0);
  const double d20 = std::abs(min_form_factor(20.0, p) - 1.0);
  const double d40 = std::abs(min_form_factor(40.0, p) - 1.0);
  CHECK(d10 > d20);
  CHECK(d20 > d40);
  const auto q = make_model(0.25);
  CHECK(std::abs(min_form_factor(1.3, q) / min_form_factor(-1.3, q) - s_matrix(1.3, q)) < 1e-9);
}

TEST_CASE("min_form_factor reflection symmetry") {
  const auto p = make_model(0.3);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(-1.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const cplx beta(re(rng), im(rng));
    CHECK(std::abs(min_form_factor(-std::conj(beta), p) - std::conj(min_form_factor(beta, p))) <
          1e-12 * std::max(1.0, std::abs(min_form_factor(beta, p))));
  }
}

TEST_CASE("varpi factorization of the minimal form factor") {
  const auto p = make_model(0.3);
  const cplx beta = 2.1;
  const cplx z = cplx(0.0, 1.0) * beta / (2.0 * kPi);
  const cplx rebuilt = -std::sin(kPi * z) / kPi * varpi(z, p.b) * varpi(z, p.b_hat);
  CHECK(rel(rebuilt, min_form_factor(beta, p)) < 1e-10);
  const auto sd = make_model(0.25);
  CHECK(varpi(z, sd.b) == varpi(z, sd.b_hat));
}

TEST_CASE("min_form_factor_pair consistency") {
  const auto p = make_model(0.3);
  for (cplx beta : {cplx(0.4, 0.0), cplx(-1.2, 0.3), cplx(0.2, 3.0)}) {
    const auto pair = min_form_factor_pair(beta, p);
    CHECK(rel(pair.f, min_form_factor(beta, p)) < 1e-13);
    CHECK(rel(pair.f_over_sinh * std::sinh(beta), pair.f) < 1e-12);
  }
  const auto at0 = min_form_factor_pair(0.0, p);
  CHECK(at0.f == cplx(0.0));
  CHECK(std::isfinite(std::abs(at0.f_over_sinh)));
  CHECK(std::abs(at0.f_over_sinh) > 0.0);
}

TEST_CASE("free point") {
  const auto p = make_model(0.0);
  CHECK(min_form_factor({0.3, 0.2}, p) == cplx(1.0));
  CHECK(s_matrix({0.3, 0.2}, p) == cplx(1.0));
}
