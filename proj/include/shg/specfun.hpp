#pragma once

#include <complex>

namespace shg {

using cplx = std::complex<double>;

struct ModelParams {
  double b = 0.0;
  double b_hat = 0.5;
  double mass = 1.0;
};

// Validates 0 <= b <= 1/2 and mass > 0; sets b_hat = 1/2 - b.
ModelParams make_model(double b, double mass = 1.0);

// Log-Gamma on the plane cut along the negative real axis, real on (0, inf).
cplx log_gamma(cplx z);

// A log of G(z) defined modulo 2*pi*i.
cplx log_barnes_g(cplx z);

// Leading asymptotic form of G(1+z+a)/G(1+z) for large |z|.
cplx barnes_ratio_asymptotic(cplx z, cplx a);

cplx s_matrix(cplx beta, const ModelParams& params);

// Barnes ratio block; exp of
// lnG(1-e-z) + lnG(2-e+z) - lnG(1+e+z) - lnG(e-z).
cplx varpi(cplx z, double exponent);

cplx min_form_factor(cplx beta, const ModelParams& params);

struct MinFormFactorPair {
  cplx f;           // F(beta)
  cplx f_over_sinh; // F(beta) / sinh(beta), finite at beta = 0
};

// Both quantities from a single Barnes evaluation.
MinFormFactorPair min_form_factor_pair(cplx beta, const ModelParams& params);

}  // namespace shg
