#pragma once

namespace simtext::stats {

// Standard normal CDF.
double norm_cdf(double x);

// Log of the complete beta function B(a, b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), evaluated with a continued
// fraction (modified Lentz). Accurate to ~1e-15 in the interior.
double inc_beta(double a, double b, double x);

// Student t CDF with real-valued df.
double t_cdf(double t, double df);

// Inverse of t_cdf in the first argument.
double t_ppf(double p, double df);

// Central F CDF and its inverse.
double f_cdf(double x, double df1, double df2);
double f_ppf(double p, double df1, double df2);

// Noncentral t CDF (series of incomplete beta terms).
double noncentral_t_cdf(double t, double df, double ncp);

// Noncentral F CDF (Poisson-weighted incomplete beta series).
double noncentral_f_cdf(double x, double df1, double df2, double lambda);

}  // namespace simtext::stats
