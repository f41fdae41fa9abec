#include "shg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include <boost/math/special_functions/legendre.hpp>

#include "shg/error.hpp"

namespace shg {

namespace {

Rule1D build_gauss_legendre(int order) {
  const auto zeros = boost::math::legendre_p_zeros<double>(order);
  Rule1D rule;
  auto push = [&](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    rule.x.push_back(x);
    rule.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0.0) push(-*it);
  for (double x : zeros) push(x);
  return rule;
}

}  // namespace

const Rule1D& gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::Config, "quadrature order must be positive");
  static std::mutex mutex;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_gauss_legendre(order)).first;
  return it->second;
}

Rule1D composite_rule(const std::vector<double>& breakpoints, int order) {
  const Rule1D& base = gauss_legendre(order);
  Rule1D rule;
  rule.x.reserve(base.x.size() * breakpoints.size());
  rule.w.reserve(base.x.size() * breakpoints.size());
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < base.x.size(); ++i) {
      rule.x.push_back(mid + half * base.x[i]);
      rule.w.push_back(half * base.w[i]);
    }
  }
  return rule;
}

std::vector<double> panel_breakpoints(double lo, double hi, double max_width,
                                      std::vector<double> extra) {
  std::vector<double> cuts{lo, hi};
  for (double e : extra)
    if (e > lo && e < hi) cuts.push_back(e);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out{cuts.front()};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 1e-12) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_width)));
    for (int k = 1; k <= pieces; ++k) out.push_back(cuts[i] + len * k / pieces);
  }
  return out;
}

std::complex<double> tensor_sum(
    const std::vector<const Rule1D*>& axes,
    const std::function<std::complex<double>(const std::vector<double>&)>& f,
    int threads) {
  const std::size_t dim = axes.size();
  if (dim == 0) return f({});
  const std::size_t outer = axes[0]->x.size();
  std::vector<std::complex<double>> partial(outer, 0.0);

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> point(dim);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t i0 = begin; i0 < end; ++i0) {
      point[0] = axes[0]->x[i0];
      std::fill(idx.begin() + 1, idx.end(), 0);
      std::complex<double> acc = 0.0;
      while (true) {
        double w = axes[0]->w[i0];
        for (std::size_t d = 1; d < dim; ++d) {
          point[d] = axes[d]->x[idx[d]];
          w *= axes[d]->w[idx[d]];
        }
        acc += w * f(point);
        bool finished = true;
        for (std::size_t d = dim - 1; d >= 1; --d) {
          if (++idx[d] < axes[d]->x.size()) {
            finished = false;
            break;
          }
          idx[d] = 0;
        }
        if (finished) break;
      }
      partial[i0] = acc;
    }
  };

  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(outer)));
  if (nthreads == 1) {
    work(0, outer);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (outer + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(outer, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  std::complex<double> total = 0.0;
  for (const auto& v : partial) total += v;
  return total;
}

}  // namespace shg
