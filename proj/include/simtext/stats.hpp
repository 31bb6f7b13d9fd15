#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "simtext/distributions.hpp"

namespace simtext::stats {

struct GroupSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

GroupSummary summarize(const std::vector<double>& values);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;  // Welch-Satterthwaite, fractional
  double p = 1.0;   // two-tailed
};

WelchResult welch_t(const GroupSummary& a, const GroupSummary& b);

// (mean_a - mean_b) / sqrt((sd_a^2 + sd_b^2) / 2)
double cohens_d(const GroupSummary& a, const GroupSummary& b);

struct BootstrapCi {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t redraws = 0;  // degenerate resamples that were redrawn
};

// 95% percentile bootstrap for Cohen's d, resampling within each group.
// Each replicate draws from its own counter-derived stream, so results are
// identical for any worker count.
BootstrapCi bootstrap_d_ci(const std::vector<double>& a,
                           const std::vector<double>& b,
                           std::size_t replicates, std::uint64_t seed,
                           int jobs = 1);

inline constexpr std::size_t kDefaultBootstrapReplicates = 5000;

// Two-group comparison as reported throughout: Welch t, Cohen's d, and (in
// raw-data mode) a percentile-bootstrap CI for d.
struct ComparisonReport {
  std::string measure;
  std::string group_a;
  std::string group_b;
  GroupSummary a;
  GroupSummary b;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double d = 0.0;
  BootstrapCi d_ci;
  bool has_ci = false;       // false in summary-statistics mode
  std::size_t replicates = 0;
};

ComparisonReport compare_groups(const std::string& measure,
                                const std::string& label_a,
                                const std::vector<double>& values_a,
                                const std::string& label_b,
                                const std::vector<double>& values_b,
                                std::size_t replicates, std::uint64_t seed,
                                int jobs = 1);

// From published moments alone; no bootstrap CI is possible.
ComparisonReport compare_summaries(const std::string& measure,
                                   const std::string& label_a,
                                   const GroupSummary& a,
                                   const std::string& label_b,
                                   const GroupSummary& b);

double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// 95% CI via Fisher's z transform with half-width 1.96/sqrt(n-3).
Interval fisher_ci(double r, std::size_t n);

// items: one inner vector per item, equal lengths (observations).
double cronbach_alpha(const std::vector<std::vector<double>>& items);
double cronbach_alpha_from_covariance(const Eigen::MatrixXd& cov);

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  std::vector<double> t;
  std::vector<double> p;
  double r2 = 0.0;
  double sigma2 = 0.0;
  std::size_t df_resid = 0;
};

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

enum class Design { two_sample_t, rm_anova_within };

// Repeated-measures power convention. multivariate uses df2 = N - m + 1
// (the MANOVA-style repeated-measures test); univariate uses the sphericity-
// corrected df2 = (N-1)(m-1) epsilon. Both share lambda = f^2 N m eps/(1-rho).
enum class RmConvention { multivariate, univariate };

struct PowerRequest {
  Design design = Design::two_sample_t;
  double effect = 0.0;  // d for t designs, f for rm designs
  double alpha = 0.05;  // two-tailed
  double power = 0.80;
  int measurements = 3;    // rm only
  double rho = 0.5;        // rm only
  double epsilon = 1.0;    // rm only
  RmConvention convention = RmConvention::multivariate;
};

// Smallest total sample size reaching the target power. Two-sample designs
// return 2n for the smallest per-group n.
long power_n(const PowerRequest& req);

// Achieved power at a given total sample size.
double power_at(const PowerRequest& req, long total_n);

struct DensitySummary {
  std::vector<double> bin_edges;       // size bins + 1
  std::vector<std::size_t> counts;     // size bins
  std::vector<double> kde_x;           // 256 evaluation points
  std::vector<double> kde_y;
  double bandwidth = 0.0;
  bool kde_skipped = false;
  std::string warning;
};

DensitySummary density_summary(const std::vector<double>& values,
                               int bins = 30);

void write_density_csv(const std::string& path, const DensitySummary& d);

// Minimal SVG overlay of one curve per named group.
std::string density_svg(
    const std::vector<std::pair<std::string, DensitySummary>>& groups);

// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace simtext::stats
