#include "simtext/distributions.hpp"

#include <cmath>
#include <limits>

#include "simtext/error.hpp"

namespace simtext::stats {

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440084436210485);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz method.
double beta_cf(double a, double b, double x) {
  const int max_iter = 500;
  const double eps = 1e-15;
  const double tiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw AnalysisError("inc_beta: shape parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw AnalysisError("t_cdf: df must be positive");
  if (t == 0.0) return 0.5;
  double x = df / (df + t * t);
  double tail = 0.5 * inc_beta(0.5 * df, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

namespace {

// Inverts a monotone CDF by bracket expansion plus bisection.
template <typename F>
double invert_cdf(F cdf, double p, double lo, double hi) {
  for (int i = 0; i < 200 && cdf(lo) > p; ++i) {
    hi = lo;
    lo = lo < 0.0 ? lo * 2.0 : (lo > 0.0 ? lo * 0.5 : -1.0);
  }
  for (int i = 0; i < 200 && cdf(hi) < p; ++i) {
    lo = hi;
    hi = hi > 0.0 ? hi * 2.0 : (hi < 0.0 ? hi * 0.5 : 1.0);
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cdf(mid) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double t_ppf(double p, double df) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw AnalysisError("t_ppf: p must be in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  return invert_cdf([df](double t) { return t_cdf(t, df); }, p, -1.0, 1.0);
}

double f_cdf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw AnalysisError("f_cdf: df must be positive");
  }
  if (x <= 0.0) return 0.0;
  double y = df1 * x / (df1 * x + df2);
  return inc_beta(0.5 * df1, 0.5 * df2, y);
}

double f_ppf(double p, double df1, double df2) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw AnalysisError("f_ppf: p must be in (0, 1)");
  }
  return invert_cdf([df1, df2](double x) { return f_cdf(x, df1, df2); }, p,
                    0.5, 2.0);
}

double noncentral_t_cdf(double t, double df, double ncp) {
  if (!(df > 0.0)) {
    throw AnalysisError("noncentral_t_cdf: df must be positive");
  }
  // Series of paired incomplete beta terms (Lenth's method). Negative t is
  // mapped through the symmetry P(T<t; ncp) = 1 - P(T<-t; -ncp).
  bool negdel = false;
  double tt = t;
  double del = ncp;
  if (t < 0.0) {
    negdel = true;
    tt = -t;
    del = -ncp;
  }
  double result = 0.0;
  double x = tt * tt / (tt * tt + df);
  if (x > 0.0) {
    const double errmax = 1e-14;
    const int itrmax = 2000;
    double lambda = del * del;
    double p = 0.5 * std::exp(-0.5 * lambda);
    double q = 0.79788456080286535587989211986876 * p * del;
    double s = -0.5 * std::expm1(-0.5 * lambda);
    double a = 0.5;
    double b = 0.5 * df;
    double rxb = std::exp(b * std::log1p(-x));
    double albeta = log_beta(a, b);
    double xodd = inc_beta(a, b, x);
    double godd = 2.0 * rxb * std::exp(a * std::log(x) - albeta);
    double xeven = 1.0 - rxb;
    double geven = b * x * rxb;
    result = p * xodd + q * xeven;
    for (int en = 1; en <= itrmax; ++en) {
      a += 1.0;
      xodd -= godd;
      xeven -= geven;
      godd *= x * (a + b - 1.0) / a;
      geven *= x * (a + b - 0.5) / (a + 0.5);
      p *= 0.5 * lambda / en;
      q *= 0.5 * lambda / (en + 0.5);
      s -= p;
      result += p * xodd + q * xeven;
      double errbd = 2.0 * s * (xodd - godd);
      if (errbd < errmax && en > 0.5 * lambda) break;
    }
  }
  result += norm_cdf(-del);
  if (negdel) result = 1.0 - result;
  if (result < 0.0) result = 0.0;
  if (result > 1.0) result = 1.0;
  return result;
}

double noncentral_f_cdf(double x, double df1, double df2, double lambda) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw AnalysisError("noncentral_f_cdf: df must be positive");
  }
  if (lambda < 0.0) {
    throw AnalysisError("noncentral_f_cdf: lambda must be nonnegative");
  }
  if (x <= 0.0) return 0.0;
  double y = df1 * x / (df1 * x + df2);
  double a = 0.5 * df1;
  double b = 0.5 * df2;
  double half_l = 0.5 * lambda;
  double w = std::exp(-half_l);
  double wsum = w;
  double ib = inc_beta(a, b, y);
  double sum = w * ib;
  double log_y = std::log(y);
  double log_1my = std::log1p(-y);
  for (int j = 1; j <= 100000; ++j) {
    double aj = a + (j - 1);
    ib -= std::exp(aj * log_y + b * log_1my - log_beta(aj, b)) / aj;
    if (ib < 0.0) ib = 0.0;
    w *= half_l / j;
    wsum += w;
    sum += w * ib;
    if (j > half_l && (1.0 - wsum) * ib < 1e-14) break;
  }
  return sum > 1.0 ? 1.0 : sum;
}

}  // namespace simtext::stats
