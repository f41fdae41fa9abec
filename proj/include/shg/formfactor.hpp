#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "shg/combin.hpp"
#include "shg/specfun.hpp"

namespace shg {

class FormFactorProvider {
 public:
  virtual ~FormFactorProvider() = default;
  virtual cplx evaluate(const std::vector<cplx>& beta) const = 0;
  virtual std::string kind() const = 0;
  virtual int max_n() const { return 10; }
  virtual bool supports_complex_strip() const { return true; }
};

struct OperatorSpec {
  std::string name;
  double omega = 0.0;
  double spin = 0.0;
  double growth = 0.0;
  std::shared_ptr<const FormFactorProvider> provider;

  cplx form_factor(const std::vector<cplx>& beta) const;
};

class PnSolution {
 public:
  virtual ~PnSolution() = default;
  virtual cplx evaluate(const std::vector<cplx>& beta, const std::vector<int>& ell) const = 0;
  virtual double spin() const = 0;
  virtual double growth() const = 0;
  virtual int max_n() const { return 10; }
};

// p_n(beta|l) = N_n prod_k q^{1-2 l_k} (sum_k e^{beta_k})^d, d in {0, 1}, with
// N_n = g(0,1)^{floor(n/2)}, g(0,1) = -1/(sin(2 pi b) F(i pi)); N_n = 1 at b = 0.
class ExponentialPn : public PnSolution {
 public:
  ExponentialPn(const ModelParams& params, double q, int degree);
  cplx evaluate(const std::vector<cplx>& beta, const std::vector<int>& ell) const override;
  double spin() const override { return degree_; }
  double growth() const override { return degree_; }
  cplx normalization(int n) const;
  double q() const { return q_; }
  int degree() const { return degree_; }

 private:
  double q_;
  int degree_;
  cplx g01_;
};

cplx g01_constant(const ModelParams& params);

cplx k_transform(const PnSolution& p, const std::vector<cplx>& beta,
                 const ModelParams& params);

// Plain product of min_form_factor over pairs a<b times k_transform.
cplx build_form_factor(const PnSolution& p, const std::vector<cplx>& beta,
                       const ModelParams& params);

// F_n = 1 for every n. Not a bootstrap solution; quadrature fixture only.
class UnitProvider : public FormFactorProvider {
 public:
  cplx evaluate(const std::vector<cplx>&) const override { return 1.0; }
  std::string kind() const override { return "unit"; }
};

// F_n = A_n exp(s sum_a beta_a) [prod_{a<b} F(beta_ab)].
class ExponentialLikeProvider : public FormFactorProvider {
 public:
  ExponentialLikeProvider(const ModelParams& params, std::vector<cplx> amplitudes,
                          double weight, bool include_minimal);
  cplx evaluate(const std::vector<cplx>& beta) const override;
  std::string kind() const override { return "exponential-like"; }
  int max_n() const override { return static_cast<int>(amplitudes_.size()) - 1; }

 private:
  ModelParams params_;
  std::vector<cplx> amplitudes_;
  double weight_;
  bool include_minimal_;
};

// K-transform of a p_n family; pair factors fused so that coincident
// rapidities are evaluated without a 1/sinh singularity.
class KTransformProvider : public FormFactorProvider {
 public:
  KTransformProvider(const ModelParams& params, std::shared_ptr<const PnSolution> p);
  cplx evaluate(const std::vector<cplx>& beta) const override;
  std::string kind() const override { return "k-transform"; }
  int max_n() const override { return p_->max_n(); }
  const PnSolution& pn() const { return *p_; }

 private:
  ModelParams params_;
  std::shared_ptr<const PnSolution> p_;
};

OperatorSpec make_unit_operator(const std::string& name = "unit");
OperatorSpec make_ktransform_operator(const ModelParams& params, double q, int degree,
                                      const std::string& name = "ktransform");

// Provider-definition document: name, omega, spin, growth, provider{kind, ...}.
OperatorSpec operator_from_json(const nlohmann::json& doc, const ModelParams& params);

struct AxiomReport {
  double exchange = 0.0;   // I
  double cyclic = 0.0;     // II
  double residue = 0.0;    // III
  double boost = 0.0;      // IV
  double residue_radius_gap = 0.0;
};

struct AxiomOptions {
  int samples = 20;
  unsigned seed = 12345;
  double residue_radius = 1e-2;
  int residue_nodes = 64;
  bool check_residue = true;
};

// -i Res_{alpha=beta} F_{n+2}(alpha+i pi, beta, rest) by a circle trapezoid
// rule at radii r and r/2 with Richardson extrapolation.
struct ResidueEstimate {
  cplx value;
  double radius_gap;
};
ResidueEstimate kinematic_residue(const OperatorSpec& op, cplx beta,
                                  const std::vector<cplx>& rest, double radius, int nodes);

AxiomReport verify_axioms(const OperatorSpec& op, const ModelParams& params, int n,
                          const AxiomOptions& options = {});

struct RapidityBlocks {
  CompositionVector n;
  std::vector<std::vector<cplx>> values;  // indexed by CompositionVector::index

  explicit RapidityBlocks(const CompositionVector& c);
  cplx get(const BlockVar& v) const { return values[CompositionVector::index(v.b, v.a)][v.j - 1]; }
  std::vector<cplx>& block(int b, int a) { return values[CompositionVector::index(b, a)]; }
  const std::vector<cplx>& block(int b, int a) const {
    return values[CompositionVector::index(b, a)];
  }
};

struct FactorizedForm {
  cplx prefactor;
  cplx regular;
  cplx full;
};

// F^{(O_p)}(A^{(p)} + i pi - i eps, B^{(p)}) split as prefactor * h_p.
FactorizedForm factorize_regular(const std::vector<OperatorSpec>& ops,
                                 const RapidityBlocks& gamma, int p, double eps);

}  // namespace shg
