#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shg/formfactor.hpp"
#include "shg/specfun.hpp"

namespace shg::suites {

struct Check {
  std::string label;
  double value = 0.0;
  double limit = 0.0;  // passes iff value < limit
  bool passed = false;
};

struct Report {
  explicit Report(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;

  void add(const std::string& label, double value, double limit);
  // A check that failed by throwing; recorded with value = inf.
  void fail(const std::string& label, const std::string& why);
  bool passed() const;
  // Largest value / limit ratio.
  const Check* worst() const;
};

struct Options {
  bool quick = false;
  int threads = 1;
  double runtime_limit = 0.0;  // seconds, 0 disables the runtime check
};

enum class Grid { Coarse, Fine };

// Points with |z| in [0.5, 40] and |arg z| <= 3 pi / 4.
std::vector<cplx> barnes_grid(Grid grid);
// |G(z+1) / (Gamma(z) G(z)) - 1|.
double barnes_funceq_residual(cplx z);

Report smatrix(const Options& o);
Report barnes(const Options& o);
Report min_form_factor(const Options& o);
Report cauchy(const Options& o);
Report chains(const Options& o);
Report compositions(const Options& o);
// Uses the given operators when nonempty, otherwise the shipped fixtures.
Report axioms(const Options& o, const std::vector<OperatorSpec>& ops = {},
              const ModelParams* params = nullptr);
Report kernels(const Options& o);
Report bessel(const Options& o);
Report contours(const Options& o);
Report representation(const Options& o);
Report symmetry(const Options& o);

}  // namespace shg::suites
