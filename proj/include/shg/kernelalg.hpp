#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shg/combin.hpp"
#include "shg/formfactor.hpp"
#include "shg/specfun.hpp"

namespace shg {

struct DiracPair {
  Slot alpha;
  Slot beta;
};

// S(from | to): F(.., from, ..) = S(from | to) F(.., to, ..).
struct SWord {
  VectorWord from;
  VectorWord to;
};

struct FormalTerm {
  int phase_exponent = 0;  // multiplies e^{-2 i pi omega}
  int sign = 1;
  std::vector<DiracPair> dirac;
  std::vector<SWord> s_words;
  VectorWord ff;
};

enum class KernelFlavor { Direct, Dual, Mixed, Jump, Custom };

std::string to_string(KernelFlavor f);

struct FormalKernelSum {
  int n = 0;  // alpha variables
  int m = 0;  // beta variables
  KernelFlavor flavor = KernelFlavor::Direct;
  std::vector<int> a1;  // mixed flavor: alpha indices of A1
  std::vector<FormalTerm> terms;

  nlohmann::json to_json() const;
};

constexpr int kMaxKernelSize = 6;

FormalKernelSum expand_direct(int n, int m);
FormalKernelSum expand_dual(int n, int m);
// a1: increasing alpha indices in [0, n) forming A1; A2 is the complement.
FormalKernelSum expand_mixed(int n, int m, const std::vector<int>& a1);
// F_+(alpha + i pi, beta_n) - F_-(alpha + i pi, beta_n) as Dirac-weighted terms.
std::vector<FormalTerm> jump_terms(int n);

long long direct_term_count(int n, int m);
long long mixed_term_count(int n, int m, int a1_size);

// Checks the slot-conservation and Dirac-injectivity invariants.
bool term_well_formed(const FormalTerm& t, int n, int m);

struct GaussianTest {
  std::vector<double> center;
  std::vector<double> width;

  cplx operator()(const std::vector<cplx>& beta) const;
};

struct PairingOptions {
  std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  int order = 3;
  double tol = 1e-6;
  int gl_order = 12;
  double panel_width = 1.0;
  double half_range = 8.0;  // in units of the test-function width
};

struct PairingResult {
  cplx value;
  double error = 0.0;
  std::vector<cplx> per_eps;
};

// Shift of the free beta contours off the real line.
double contour_offset(const ModelParams& params);

// Value of a term with every variable fixed; eps is the boundary regulator.
cplx term_value(const FormalTerm& t, const std::vector<cplx>& alpha,
                const std::vector<cplx>& beta, double eps, const OperatorSpec& op,
                const ModelParams& params);

// Pairing of the sum against test(beta) d^m beta / (2 pi)^m at fixed eps.
cplx pair_at_eps(const FormalKernelSum& sum, const std::vector<double>& alpha,
                 const GaussianTest& test, const OperatorSpec& op, const ModelParams& params,
                 double eps, const PairingOptions& options = {});

// Neville extrapolation of the eps sequence to eps = 0.
PairingResult pair_numeric(const FormalKernelSum& sum, const std::vector<double>& alpha,
                           const GaussianTest& test, const OperatorSpec& op,
                           const ModelParams& params, const PairingOptions& options = {});

struct GTotSkeleton {
  int k = 2;
  CompositionVector n;
  int t = 0;  // 0: standard representation
  std::vector<SWord> s_words;
  std::vector<VectorWord> ff;             // ff[p - 1] is the argument of O_p
  std::vector<std::pair<int, int>> blocks;  // nonempty (b, a) carrying plane waves

  nlohmann::json to_json() const;
};

GTotSkeleton expand_g_tot(int k, const CompositionVector& n);
GTotSkeleton expand_g_tot_mixed(int k, int t, const CompositionVector& n);

}  // namespace shg
