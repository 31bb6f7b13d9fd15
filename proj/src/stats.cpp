#include "simtext/stats.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "simtext/error.hpp"
#include "simtext/rng.hpp"

namespace simtext::stats {

GroupSummary summarize(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw AnalysisError("summarize: need at least 2 values");
  }
  double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / n;
  double ss = 0.0;
  for (double v : values) {
    double d = v - mean;
    ss += d * d;
  }
  return GroupSummary{values.size(), mean, std::sqrt(ss / (n - 1.0))};
}

WelchResult welch_t(const GroupSummary& a, const GroupSummary& b) {
  if (a.n < 2 || b.n < 2) {
    throw AnalysisError("welch_t: each group needs n >= 2");
  }
  if (a.sd == 0.0 && b.sd == 0.0) {
    throw AnalysisError("welch_t: both groups have zero variance");
  }
  double va = a.sd * a.sd / a.n;
  double vb = b.sd * b.sd / b.n;
  WelchResult r;
  r.t = (a.mean - b.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / (a.n - 1.0) + vb * vb / (b.n - 1.0));
  r.p = r.t == 0.0 ? 1.0 : 2.0 * (1.0 - t_cdf(std::fabs(r.t), r.df));
  if (r.p > 1.0) r.p = 1.0;
  return r;
}

double cohens_d(const GroupSummary& a, const GroupSummary& b) {
  double pooled = std::sqrt((a.sd * a.sd + b.sd * b.sd) / 2.0);
  if (pooled == 0.0) {
    throw AnalysisError("cohens_d: pooled standard deviation is zero");
  }
  return (a.mean - b.mean) / pooled;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw AnalysisError("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double h = (sorted.size() - 1) * q;
  std::size_t lo = static_cast<std::size_t>(h);
  double frac = h - lo;
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

// d statistic of one bootstrap replicate; false when the resample is
// degenerate (zero pooled variance).
bool resample_d(const std::vector<double>& a, const std::vector<double>& b,
                Rng& rng, double& d_out) {
  double sum_a = 0.0, ss_a = 0.0;
  double na = static_cast<double>(a.size());
  std::vector<double> draw(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    draw[i] = a[rng.next_below(a.size())];
    sum_a += draw[i];
  }
  double mean_a = sum_a / na;
  for (double v : draw) ss_a += (v - mean_a) * (v - mean_a);
  double var_a = ss_a / (na - 1.0);

  double sum_b = 0.0, ss_b = 0.0;
  double nb = static_cast<double>(b.size());
  draw.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    draw[i] = b[rng.next_below(b.size())];
    sum_b += draw[i];
  }
  double mean_b = sum_b / nb;
  for (double v : draw) ss_b += (v - mean_b) * (v - mean_b);
  double var_b = ss_b / (nb - 1.0);

  double pooled = std::sqrt((var_a + var_b) / 2.0);
  if (pooled == 0.0) return false;
  d_out = (mean_a - mean_b) / pooled;
  return true;
}

}  // namespace

BootstrapCi bootstrap_d_ci(const std::vector<double>& a,
                           const std::vector<double>& b,
                           std::size_t replicates, std::uint64_t seed,
                           int jobs) {
  if (a.size() < 2 || b.size() < 2) {
    throw AnalysisError("bootstrap_d_ci: each sample needs n >= 2");
  }
  if (replicates < 1000) {
    throw AnalysisError("bootstrap_d_ci: need at least 1000 replicates");
  }
  GroupSummary sa = summarize(a);
  GroupSummary sb = summarize(b);
  if (sa.sd == 0.0 && sb.sd == 0.0) {
    throw AnalysisError("bootstrap_d_ci: both samples are degenerate");
  }
  std::vector<double> stats(replicates);
  std::vector<std::size_t> redraw_counts(replicates, 0);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double d = 0.0;
      bool ok = false;
      std::size_t attempt = 0;
      for (; attempt <= 100; ++attempt) {
        Rng rng(substream_seed(seed, r, attempt));
        if (resample_d(a, b, rng, d)) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        throw AnalysisError(
            "bootstrap_d_ci: replicate stayed degenerate after 100 redraws");
      }
      stats[r] = d;
      redraw_counts[r] = attempt;
    }
  };
  if (jobs < 1) jobs = 1;
  if (jobs == 1) {
    run_range(0, replicates);
  } else {
    std::size_t workers = std::min<std::size_t>(jobs, replicates);
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::size_t chunk = (replicates + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(replicates, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back([&, begin, end]() {
        try {
          run_range(begin, end);
        } catch (...) {
          std::lock_guard<std::mutex> hold(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::sort(stats.begin(), stats.end());
  BootstrapCi ci;
  ci.lower = quantile_sorted(stats, 0.025);
  ci.upper = quantile_sorted(stats, 0.975);
  for (std::size_t c : redraw_counts) ci.redraws += c;
  return ci;
}

ComparisonReport compare_groups(const std::string& measure,
                                const std::string& label_a,
                                const std::vector<double>& values_a,
                                const std::string& label_b,
                                const std::vector<double>& values_b,
                                std::size_t replicates, std::uint64_t seed,
                                int jobs) {
  ComparisonReport report;
  report.measure = measure;
  report.group_a = label_a;
  report.group_b = label_b;
  report.a = summarize(values_a);
  report.b = summarize(values_b);
  const WelchResult w = welch_t(report.a, report.b);
  report.t = w.t;
  report.df = w.df;
  report.p = w.p;
  report.d = cohens_d(report.a, report.b);
  report.d_ci = bootstrap_d_ci(values_a, values_b, replicates, seed, jobs);
  report.has_ci = true;
  report.replicates = replicates;
  return report;
}

ComparisonReport compare_summaries(const std::string& measure,
                                   const std::string& label_a,
                                   const GroupSummary& a,
                                   const std::string& label_b,
                                   const GroupSummary& b) {
  ComparisonReport report;
  report.measure = measure;
  report.group_a = label_a;
  report.group_b = label_b;
  report.a = a;
  report.b = b;
  const WelchResult w = welch_t(a, b);
  report.t = w.t;
  report.df = w.df;
  report.p = w.p;
  report.d = cohens_d(a, b);
  return report;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw AnalysisError("pearson_r: length mismatch");
  }
  if (x.size() < 3) {
    throw AnalysisError("pearson_r: need at least 3 observations");
  }
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw AnalysisError("pearson_r: zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

Interval fisher_ci(double r, std::size_t n) {
  if (!(std::fabs(r) < 1.0)) {
    throw AnalysisError("fisher_ci: |r| must be < 1");
  }
  if (n < 4) {
    throw AnalysisError("fisher_ci: need n >= 4");
  }
  double z = std::atanh(r);
  double hw = 1.96 / std::sqrt(static_cast<double>(n) - 3.0);
  return Interval{std::tanh(z - hw), std::tanh(z + hw)};
}

double cronbach_alpha(const std::vector<std::vector<double>>& items) {
  std::size_t k = items.size();
  if (k < 2) throw AnalysisError("cronbach_alpha: need at least 2 items");
  std::size_t n = items[0].size();
  if (n < 3) {
    throw AnalysisError("cronbach_alpha: need at least 3 observations");
  }
  for (const auto& item : items) {
    if (item.size() != n) {
      throw AnalysisError("cronbach_alpha: items have unequal lengths");
    }
  }
  std::vector<double> totals(n, 0.0);
  double item_var_sum = 0.0;
  for (const auto& item : items) {
    GroupSummary s = summarize(item);
    item_var_sum += s.sd * s.sd;
    for (std::size_t i = 0; i < n; ++i) totals[i] += item[i];
  }
  GroupSummary st = summarize(totals);
  double total_var = st.sd * st.sd;
  if (total_var == 0.0) {
    throw AnalysisError("cronbach_alpha: zero total variance");
  }
  double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - item_var_sum / total_var);
}

double cronbach_alpha_from_covariance(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() < 2) {
    throw AnalysisError(
        "cronbach_alpha_from_covariance: need a square matrix, k >= 2");
  }
  double total = cov.sum();
  if (total == 0.0) {
    throw AnalysisError("cronbach_alpha_from_covariance: zero total variance");
  }
  double k = static_cast<double>(cov.rows());
  return k / (k - 1.0) * (1.0 - cov.trace() / total);
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n <= p) {
    throw AnalysisError("ols: need more rows than columns");
  }
  if (y.size() != n) {
    throw AnalysisError("ols: response length mismatch");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    throw AnalysisError("ols: design matrix is rank deficient");
  }
  OlsFit fit;
  fit.beta = qr.solve(y);
  Eigen::VectorXd resid = y - X * fit.beta;
  double ssr = resid.squaredNorm();
  fit.df_resid = static_cast<std::size_t>(n - p);
  fit.sigma2 = ssr / fit.df_resid;
  Eigen::MatrixXd xtx_inv =
      (X.transpose() * X)
          .ldlt()
          .solve(Eigen::MatrixXd::Identity(p, p));
  fit.se.resize(p);
  fit.t.resize(p);
  fit.p.resize(p);
  double df = static_cast<double>(fit.df_resid);
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.se[j] = std::sqrt(fit.sigma2 * xtx_inv(j, j));
    if (fit.se[j] > 0.0) {
      fit.t[j] = fit.beta[j] / fit.se[j];
      fit.p[j] = 2.0 * (1.0 - t_cdf(std::fabs(fit.t[j]), df));
    } else {
      fit.t[j] = 0.0;
      fit.p[j] = 1.0;
    }
  }
  double mean_y = y.mean();
  double sst = (y.array() - mean_y).square().sum();
  fit.r2 = sst == 0.0 ? 1.0 : 1.0 - ssr / sst;
  return fit;
}

namespace {

void validate_power_request(const PowerRequest& req) {
  if (!(req.effect > 0.0)) {
    throw AnalysisError("power: effect size must be positive");
  }
  if (!(req.alpha > 0.0) || !(req.alpha < 1.0)) {
    throw AnalysisError("power: alpha must be in (0, 1)");
  }
  if (!(req.power > 0.0) || !(req.power < 1.0)) {
    throw AnalysisError("power: target power must be in (0, 1)");
  }
  if (req.design == Design::rm_anova_within) {
    if (req.measurements < 2) {
      throw AnalysisError("power: rm design needs >= 2 measurements");
    }
    if (!(req.rho >= 0.0) || !(req.rho < 1.0)) {
      throw AnalysisError("power: rho must be in [0, 1)");
    }
    if (!(req.epsilon > 0.0) || req.epsilon > 1.0) {
      throw AnalysisError("power: epsilon must be in (0, 1]");
    }
  }
}

double two_sample_power(double d, double alpha, long n_per_group) {
  double df = 2.0 * n_per_group - 2.0;
  double ncp = d * std::sqrt(n_per_group / 2.0);
  double crit = t_ppf(1.0 - alpha / 2.0, df);
  return 1.0 - noncentral_t_cdf(crit, df, ncp) +
         noncentral_t_cdf(-crit, df, ncp);
}

double rm_power(const PowerRequest& req, long n_subjects) {
  double m = req.measurements;
  double lam = req.effect * req.effect * n_subjects * m * req.epsilon /
               (1.0 - req.rho);
  double df1, df2;
  if (req.convention == RmConvention::multivariate) {
    df1 = m - 1.0;
    df2 = n_subjects - m + 1.0;
  } else {
    df1 = (m - 1.0) * req.epsilon;
    df2 = (n_subjects - 1.0) * (m - 1.0) * req.epsilon;
  }
  if (df2 < 1.0) return 0.0;
  double crit = f_ppf(1.0 - req.alpha, df1, df2);
  return 1.0 - noncentral_f_cdf(crit, df1, df2, lam);
}

}  // namespace

double power_at(const PowerRequest& req, long total_n) {
  validate_power_request(req);
  if (req.design == Design::two_sample_t) {
    long per_group = total_n / 2;
    if (per_group < 2) {
      throw AnalysisError("power: need at least 2 per group");
    }
    return two_sample_power(req.effect, req.alpha, per_group);
  }
  if (total_n < 2) throw AnalysisError("power: need at least 2 subjects");
  return rm_power(req, total_n);
}

long power_n(const PowerRequest& req) {
  validate_power_request(req);
  const long limit = 10000000;
  if (req.design == Design::two_sample_t) {
    for (long n = 2; n <= limit; ++n) {
      if (two_sample_power(req.effect, req.alpha, n) >= req.power) {
        return 2 * n;
      }
    }
  } else {
    long start = std::max<long>(2, req.convention ==
                                           RmConvention::multivariate
                                       ? req.measurements
                                       : 2);
    for (long n = start; n <= limit; ++n) {
      if (rm_power(req, n) >= req.power) return n;
    }
  }
  throw AnalysisError("power: target power unreachable within search limit");
}

}  // namespace simtext::stats
