#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "shg/combin.hpp"
#include "shg/formfactor.hpp"
#include "shg/kernelalg.hpp"
#include "shg/specfun.hpp"

namespace shg {

struct SpacetimePoint {
  double x0 = 0.0;
  double x1 = 0.0;
};

using TwoVector = std::array<cplx, 2>;

// (m cosh beta, m sinh beta)
TwoVector momentum(cplx beta, const ModelParams& params);
// u0 v0 - u1 v1
cplx minkowski_dot(const TwoVector& u, const TwoVector& v);

struct RegionReport {
  bool inside = true;
  int a = 0;  // offending pair, 1-based, a < b
  int b = 0;
  std::string reason;
};

RegionReport check_region(const std::vector<SpacetimePoint>& points);

struct ContourLadder {
  int k = 2;
  std::vector<double> eta;  // indexed by CompositionVector::index

  double at(int b, int a) const { return eta[CompositionVector::index(b, a)]; }
  double& at(int b, int a) { return eta[CompositionVector::index(b, a)]; }
};

// min(2 pi b, pi (1 - 2 b), pi/2) / 4, vanishing terms skipped.
double eta_ceiling(const ModelParams& params);

// Nonempty blocks of n in increasing ladder order; t = 0 is the standard flavor.
std::vector<std::pair<int, int>> ladder_order(const CompositionVector& n, int t = 0);

ContourLadder default_ladder(int k, const CompositionVector& n, const ModelParams& params,
                             int t = 0);
// Offsets jittered by up to 30% of the default spacing, same ordering.
ContourLadder random_ladder(int k, const CompositionVector& n, const ModelParams& params,
                            std::mt19937& rng, int t = 0);
bool ladder_admissible(const ContourLadder& ladder, const CompositionVector& n,
                       const ModelParams& params, int t = 0, std::string* why = nullptr);

enum class ContourShape { Flat, Lifted };

struct QuadratureSpec {
  int nodes = 16;               // Gauss-Legendre nodes per panel
  double L = 8.0;               // initial truncation half-width
  double tol = 1e-10;           // relative node-doubling tolerance
  double panel_phase = 3.0;     // bound on the exponent change across a panel
  double max_panel_width = 0.5;
  double gap_width = 4.0;       // panel width cap in units of the smallest ladder gap
  ContourShape shape = ContourShape::Lifted;
  int threads = 1;
};

// Amplitude times a normalized separable Gaussian around (c0, c1).
struct GaussianSmearing {
  double amplitude = 1.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double s0 = 0.1;
  double s1 = 0.1;
};

// Fourier factor of a Gaussian: integral of g(x) e^{i q.x} d^2x.
cplx gaussian_fourier(const GaussianSmearing& g, const TwoVector& q);

struct CorrelatorRequest {
  ModelParams params;
  int k = 2;
  std::vector<OperatorSpec> operators;
  std::vector<SpacetimePoint> points;
  std::vector<int> r;
  QuadratureSpec quad;
  std::optional<ContourLadder> ladder;
  std::vector<GaussianSmearing> smearing;  // empty: point-like operators

  void validate() const;
};

// R[G] for the given smearing; the plane-wave product when smearing is empty.
cplx plane_wave_factor(const CorrelatorRequest& req, const RapidityBlocks& gamma);

// S (or S^{(t)}) times F_tot (or F_tot^{(t)}) times the plane-wave factor.
cplx integrand(const CorrelatorRequest& req, const CompositionVector& n,
               const RapidityBlocks& gamma, int t = 0);

struct InResult {
  cplx value;
  double error = 0.0;
  std::vector<double> half_width;  // per integration axis
  std::size_t nodes = 0;           // fine tensor-grid size
};

InResult compute_I_n(const CorrelatorRequest& req, const CompositionVector& n, int t = 0);

struct CompositionRow {
  CompositionVector n;
  cplx I;
  double error = 0.0;
  cplx phase;       // prod exp(-2 i pi n_ba omega_ba)
  double norm = 1;  // 1 / (n! (2 pi)^{|n|})
  cplx contribution;
};

struct WrResult {
  cplx total;
  double error = 0.0;
  std::vector<CompositionRow> rows;
};

WrResult compute_W_r(const CorrelatorRequest& req);
WrResult compute_W_r_mixed(const CorrelatorRequest& req, int t);
// Requires req.smearing with one Gaussian per operator.
WrResult smeared_correlator(const CorrelatorRequest& req, int t = 0);

}  // namespace shg
