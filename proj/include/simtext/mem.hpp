#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "simtext/corpus.hpp"
#include "simtext/stats.hpp"

namespace simtext::mem {

struct DocTermMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;  // lexicographic order
  Eigen::MatrixXd cells;           // docs x terms, binary occurrence
};

// Tokenizes each document, drops stoplist words and words shorter than 3
// characters, and keeps terms appearing in at least min_doc_fraction of
// documents. Cells are 1 when the term occurs in the document.
DocTermMatrix build_dtm(const corpus::Corpus& corpus,
                        const std::set<std::string>& stoplist,
                        double min_doc_fraction = 0.05);

std::set<std::string> load_stoplist(const std::string& path);

struct ThemeSolution {
  int k = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;        // after zero-variance drops
  std::vector<std::string> dropped_terms;
  Eigen::MatrixXd loadings;              // terms x k, varimax-rotated
  Eigen::MatrixXd theme_scores;          // docs x k, each in [0, 1]
  std::vector<double> explained_variance;  // column sums of squared loadings
  std::vector<double> eigenvalues;       // full correlation spectrum, desc
  double loading_threshold = 0.25;
};

// Correlation matrix of the binary columns, eigendecomposition, top-k
// components (k = -1 selects eigenvalue > 1), varimax rotation. A document's
// theme score is the mean occurrence of the terms loading at least
// loading_threshold (absolute) on that component.
ThemeSolution extract_themes(const DocTermMatrix& dtm, int k = -1,
                             double loading_threshold = 0.25);

// Raw varimax: pairwise planar rotations swept until the criterion change
// drops below tol. Returns the rotated loadings.
Eigen::MatrixXd varimax(const Eigen::MatrixXd& loadings, double tol = 1e-6,
                        int max_sweeps = 1000);

// Variance-of-squared-loadings objective the rotation maximizes.
double varimax_criterion(const Eigen::MatrixXd& loadings);

// OLS of y on [intercept | group | themes | extra]; the group coefficient
// (index 1) is the theme-adjusted group difference.
stats::OlsFit theme_covariate_model(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& group,
                                    const Eigen::MatrixXd& themes,
                                    const Eigen::MatrixXd& extra);

void write_loadings_csv(const std::string& path, const ThemeSolution& sol);
void write_theme_scores_csv(const std::string& path, const ThemeSolution& sol);

// Human-readable list of top-loading terms per component.
std::string theme_report(const ThemeSolution& sol, int top_terms = 8);

}  // namespace simtext::mem
