#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace shg {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule on [-1, 1], cached per order.
const Rule1D& gauss_legendre(int order);

// Composite Gauss-Legendre rule: each consecutive pair of breakpoints is one
// panel carrying `order` nodes.
Rule1D composite_rule(const std::vector<double>& breakpoints, int order);

// Uniform panels of width at most `max_width` between lo and hi, with the
// extra breakpoints inserted.
std::vector<double> panel_breakpoints(double lo, double hi, double max_width,
                                      std::vector<double> extra = {});

// Sum over the tensor grid of the given axes. The outer axis is split across
// `threads` workers; partial sums are reduced in node order.
std::complex<double> tensor_sum(
    const std::vector<const Rule1D*>& axes,
    const std::function<std::complex<double>(const std::vector<double>&)>& f,
    int threads = 1);

}  // namespace shg
