#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

// Linear mixed models with two crossed random intercepts (participant,
// stimulus), estimated by profiled REML.

namespace simtext::lmm {

// Raw trial records read from CSV; cells stay strings until a model frame
// selects and parses the columns it needs.
struct TrialTable {
  std::string origin;                           // path for error messages
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;           // 1-based line of each record

  // Index of a named column; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

TrialTable load_trial_table(const std::string& path);

// Model frame: response, fixed-effects design (first column is the
// intercept), and integer-coded grouping factors.  A factor may be inactive
// (empty vector), in which case its random intercept is dropped from the
// model; an active factor needs >= 2 levels.
struct MixedData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> term_names;          // one per column of X
  std::vector<int> participant;                 // size n, codes 0..n_p-1
  std::vector<int> stimulus;                    // size n, codes 0..n_s-1
  std::vector<std::string> participant_levels;
  std::vector<std::string> stimulus_levels;
};

// Builds a MixedData from a trial table: X = [1 | fixed_terms...] with the
// named columns parsed as numbers.  Factor levels are coded in order of first
// appearance.
MixedData build_mixed_data(const TrialTable& table, const std::string& response,
                           const std::vector<std::string>& fixed_terms,
                           const std::string& participant_col = "participant",
                           const std::string& stimulus_col = "stimulus");

struct LmmOptions {
  double tol = 1e-8;          // simplex convergence: criterion spread
  int max_iterations = 500;   // per restart
  double ratio_floor = 1e-10; // lower clamp on variance ratios
};

struct MixedModelFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;
  std::vector<std::string> term_names;
  double sigma2_participant = 0.0;
  double sigma2_stimulus = 0.0;
  double sigma2_resid = 0.0;
  double r2m = 0.0;
  double r2c = 0.0;
  double reml_deviance = 0.0;   // -2 * restricted log-likelihood at solution
  bool converged = false;
  int df_resid = 0;             // rows - rank(X), used for the t tests
  int n_obs = 0;
  int n_participants = 0;
  int n_stimuli = 0;
};

// REML fit of y ~ X + (1|participant) + (1|stimulus).  Variance ratios are
// optimised on the log scale by a Nelder-Mead simplex with three restarts;
// the best point is returned with converged=false when no restart met the
// tolerance.
MixedModelFit fit_lmm(const MixedData& data, const LmmOptions& opts = {});

// Nakagawa-Schielzeth variance partition: varF is the sample variance of the
// fitted fixed-effect predictions X*beta.
std::pair<double, double> nakagawa_r2(const MixedModelFit& fit,
                                      const MixedData& data);

// Profiled REML criterion (-2 restricted log-likelihood) at fixed variance
// ratios sigma2_g / sigma2_resid; ratios of inactive factors are ignored.
double profiled_deviance(const MixedData& data, double ratio_participant,
                         double ratio_stimulus);

// Formatted table: term, B, SE, t, p, then variance components and R2.
std::string fit_table(const MixedModelFit& fit);

// JSON report with the same content.
std::string fit_json(const MixedModelFit& fit);

}  // namespace simtext::lmm
