#pragma once

namespace spnb {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Beta(a, b) density.
double beta_pdf(double a, double b, double x);

/// x in (0, 1) with I_x(a, b) = p, absolute error below 1e-10.
/// Safeguarded Newton iteration inside a shrinking bisection bracket.
double beta_quantile(double a, double b, double p);

}  // namespace spnb
