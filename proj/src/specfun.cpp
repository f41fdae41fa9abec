#include "shg/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>

#include "shg/error.hpp"

namespace shg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kZetaPrimeMinus1 = -0.16542114370045092921;
constexpr double kShiftThreshold = 10.0;
constexpr int kSeriesTerms = 24;
constexpr double kExpBudget = 700.0;

const std::array<double, kSeriesTerms + 2>& b2n_table() {
  static const std::array<double, kSeriesTerms + 2> table = [] {
    std::array<double, kSeriesTerms + 2> t{};
    for (int k = 0; k < kSeriesTerms + 2; ++k)
      t[k] = boost::math::bernoulli_b2n<double>(k);
    return t;
  }();
  return table;
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

int shift_count(cplx z) {
  if (z.real() >= kShiftThreshold) return 0;
  return static_cast<int>(std::ceil(kShiftThreshold - z.real()));
}

// Stirling series for log Gamma(w), Re w >= kShiftThreshold.
cplx stirling(cplx w) {
  const auto& b2n = b2n_table();
  cplx result = (w - 0.5) * std::log(w) - w + kHalfLog2Pi;
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx pw = inv;
  for (int k = 1; k <= kSeriesTerms; ++k) {
    const cplx term = b2n[k] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    result += term;
    if (std::abs(term) < 1e-17 * std::abs(result)) break;
    pw *= inv2;
  }
  return result;
}

// Asymptotic series for log G(1+w).
cplx barnes_asymptotic(cplx w) {
  const auto& b2n = b2n_table();
  const cplx lw = std::log(w);
  const cplx w2 = w * w;
  cplx result = 0.5 * w2 * lw - 0.75 * w2 + w * kHalfLog2Pi - lw / 12.0 +
                kZetaPrimeMinus1;
  const cplx inv2 = 1.0 / w2;
  cplx pw = inv2;
  for (int k = 1; k <= kSeriesTerms; ++k) {
    const cplx term = b2n[k + 1] / (4.0 * k * (k + 1.0)) * pw;
    result += term;
    if (std::abs(term) < 1e-14 * 1e-3) break;
    pw *= inv2;
  }
  return result;
}

// sum_{j<n} (j+1) log(z+j), modulo 2*pi*i.
cplx weighted_log_sum(cplx z, int n) {
  cplx logs = 0.0;
  if (n > 24) {
    for (int j = 0; j < n; ++j)
      logs += static_cast<double>(j + 1) * std::log(z + static_cast<double>(j));
    return logs;
  }
  // prod_k prod_{j>=k} (z+j) with periodic folding of the accumulator
  cplx acc = 1.0;
  cplx suffix = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    suffix *= (z + static_cast<double>(j));
    acc *= suffix;
    const double a = std::abs(acc);
    if (a > 1e200 || a < 1e-200) {
      logs += std::log(acc);
      acc = 1.0;
    }
  }
  return logs + std::log(acc);
}

cplx log_barnes_g_unchecked(cplx z) {
  const int n = shift_count(z);
  if (n == 0) return barnes_asymptotic(z - 1.0);
  const cplx u = z + static_cast<double>(n);
  return barnes_asymptotic(u - 1.0) - static_cast<double>(n) * stirling(u) +
         weighted_log_sum(z, n);
}

cplx log_sin(cplx w) {
  const double y = w.imag();
  if (std::abs(y) < 30.0) return std::log(std::sin(w));
  const cplx i(0.0, 1.0);
  if (y > 0.0)
    return -i * w - std::log(2.0 * i) + std::log(std::exp(2.0 * i * w) - 1.0);
  return i * w - std::log(2.0 * i) + std::log(1.0 - std::exp(-2.0 * i * w));
}

cplx log_varpi(cplx z, double e) {
  return log_barnes_g_unchecked(1.0 - e - z) +
         log_barnes_g_unchecked(2.0 - e + z) -
         log_barnes_g_unchecked(1.0 + e + z) - log_barnes_g_unchecked(e - z);
}

void check_varpi_arguments(cplx z, double e) {
  if (is_nonpositive_integer(1.0 - e - z) || is_nonpositive_integer(2.0 - e + z) ||
      is_nonpositive_integer(1.0 + e + z) || is_nonpositive_integer(e - z))
    throw Error(ErrorKind::Pole, "varpi: Barnes G argument at a zero of G");
}

cplx guarded_exp(cplx l, const char* who) {
  if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
    throw Error(ErrorKind::Domain, std::string(who) + ": non-finite log value");
  if (l.real() > kExpBudget)
    throw Error(ErrorKind::Domain, std::string(who) + ": exponent exceeds budget");
  return std::exp(l);
}

}  // namespace

ModelParams make_model(double b, double mass) {
  if (!(b >= 0.0 && b <= 0.5))
    throw Error(ErrorKind::Domain, "coupling b must lie in [0, 1/2]");
  if (!(mass > 0.0)) throw Error(ErrorKind::Domain, "mass must be positive");
  return ModelParams{b, 0.5 - b, mass};
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z))
    throw Error(ErrorKind::Pole, "log_gamma: pole at non-positive integer");
  const int n = shift_count(z);
  cplx sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::log(z + static_cast<double>(k));
  return stirling(z + static_cast<double>(n)) - sum;
}

cplx log_barnes_g(cplx z) {
  if (is_nonpositive_integer(z))
    throw Error(ErrorKind::Pole, "log_barnes_g: zero of G at non-positive integer");
  return log_barnes_g_unchecked(z);
}

cplx barnes_ratio_asymptotic(cplx z, cplx a) {
  if (z == 0.0 || std::abs(std::arg(z)) > kPi - 0.1)
    throw Error(ErrorKind::Domain, "barnes_ratio_asymptotic: |arg z| too close to pi");
  const cplx lz = std::log(z);
  return std::exp(a * z * lz - a * z + 0.5 * a * a * lz + a * kHalfLog2Pi);
}

cplx s_matrix(cplx beta, const ModelParams& params) {
  if (params.b == 0.0 || params.b == 0.5) return 1.0;
  const double sb = std::sin(2.0 * kPi * params.b);
  const cplx sh = std::sinh(beta);
  const cplx den = sh + cplx(0.0, sb);
  if (std::abs(den) < 1e-14) throw Error(ErrorKind::Pole, "s_matrix: pole");
  return (sh - cplx(0.0, sb)) / den;
}

cplx varpi(cplx z, double exponent) {
  check_varpi_arguments(z, exponent);
  return guarded_exp(log_varpi(z, exponent), "varpi");
}

MinFormFactorPair min_form_factor_pair(cplx beta, const ModelParams& params) {
  if (params.b == 0.0 || params.b_hat == 0.0) {
    const cplx sh = std::sinh(beta);
    if (std::abs(sh) < 1e-14)
      throw Error(ErrorKind::Pole, "min_form_factor_pair: sinh(beta) vanishes");
    return {1.0, 1.0 / sh};
  }
  const cplx z = cplx(0.0, 1.0) * beta / (2.0 * kPi);
  check_varpi_arguments(z, params.b);
  check_varpi_arguments(z, params.b_hat);
  const cplx lw = log_varpi(z, params.b) + log_varpi(z, params.b_hat);
  const cplx f = beta == 0.0
                     ? cplx(0.0)
                     : -guarded_exp(log_sin(kPi * z) + lw, "min_form_factor") / kPi;
  const cplx lc = std::log(std::cosh(0.5 * beta));
  const cplx fs = cplx(0.0, -1.0) * guarded_exp(lw - lc, "min_form_factor") / (2.0 * kPi);
  return {f, fs};
}

cplx min_form_factor(cplx beta, const ModelParams& params) {
  if (params.b == 0.0 || params.b_hat == 0.0) return 1.0;
  if (beta == 0.0) return 0.0;
  const cplx z = cplx(0.0, 1.0) * beta / (2.0 * kPi);
  check_varpi_arguments(z, params.b);
  check_varpi_arguments(z, params.b_hat);
  const cplx lw = log_varpi(z, params.b) + log_varpi(z, params.b_hat);
  return -guarded_exp(log_sin(kPi * z) + lw, "min_form_factor") / kPi;
}

}  // namespace shg
