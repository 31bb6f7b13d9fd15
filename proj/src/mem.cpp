#include "simtext/mem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "simtext/csv.hpp"
#include "simtext/error.hpp"
#include "simtext/format.hpp"
#include "simtext/textmetrics.hpp"

namespace simtext::mem {

DocTermMatrix build_dtm(const corpus::Corpus& corpus,
                        const std::set<std::string>& stoplist,
                        double min_doc_fraction) {
  const auto& docs = corpus.documents();
  if (docs.size() < 20) {
    throw AnalysisError("build_dtm: need at least 20 documents, have " +
                        std::to_string(docs.size()));
  }
  if (!(min_doc_fraction > 0.0) || min_doc_fraction > 1.0) {
    throw AnalysisError("build_dtm: min_doc_fraction must be in (0, 1]");
  }
  std::vector<std::set<std::string>> doc_terms(docs.size());
  std::map<std::string, std::size_t> doc_freq;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto stream = metrics::tokenize(docs[i].text);
    for (const auto& w : stream.words) {
      if (w.size() < 3 || stoplist.count(w)) continue;
      if (doc_terms[i].insert(w).second) ++doc_freq[w];
    }
  }
  double threshold = min_doc_fraction * static_cast<double>(docs.size());
  DocTermMatrix dtm;
  for (const auto& [term, freq] : doc_freq) {
    if (static_cast<double>(freq) >= threshold) dtm.terms.push_back(term);
  }
  if (dtm.terms.empty()) {
    throw AnalysisError("build_dtm: no terms survive filtering");
  }
  dtm.doc_ids.reserve(docs.size());
  for (const auto& d : docs) {
    dtm.doc_ids.push_back(d.id + ":" + corpus::kind_name(d.kind));
  }
  dtm.cells = Eigen::MatrixXd::Zero(docs.size(), dtm.terms.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = 0; j < dtm.terms.size(); ++j) {
      if (doc_terms[i].count(dtm.terms[j])) dtm.cells(i, j) = 1.0;
    }
  }
  return dtm;
}

std::set<std::string> load_stoplist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                             line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::string w = line.substr(b);
    if (w[0] == '#') continue;
    for (char& c : w) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    words.insert(w);
  }
  return words;
}

double varimax_criterion(const Eigen::MatrixXd& L) {
  double p = static_cast<double>(L.rows());
  double total = 0.0;
  for (Eigen::Index j = 0; j < L.cols(); ++j) {
    double sum4 = L.col(j).array().pow(4).sum();
    double sum2 = L.col(j).array().square().sum();
    total += sum4 / p - (sum2 / p) * (sum2 / p);
  }
  return total;
}

Eigen::MatrixXd varimax(const Eigen::MatrixXd& loadings, double tol,
                        int max_sweeps) {
  Eigen::MatrixXd L = loadings;
  const Eigen::Index k = L.cols();
  if (k < 2) return L;
  const double p = static_cast<double>(L.rows());
  double last = varimax_criterion(L);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i + 1 < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        Eigen::ArrayXd u = L.col(i).array();
        Eigen::ArrayXd v = L.col(j).array();
        Eigen::ArrayXd x = u.square() - v.square();
        Eigen::ArrayXd y = 2.0 * u * v;
        double a = x.sum();
        double b = y.sum();
        double c = (x.square() - y.square()).sum();
        double d = 2.0 * (x * y).sum();
        double num = d - 2.0 * a * b / p;
        double den = c - (a * a - b * b) / p;
        double phi = 0.25 * std::atan2(num, den);
        if (std::fabs(phi) < 1e-12) continue;
        double cs = std::cos(phi);
        double sn = std::sin(phi);
        Eigen::VectorXd ui = L.col(i);
        Eigen::VectorXd vj = L.col(j);
        L.col(i) = cs * ui + sn * vj;
        L.col(j) = -sn * ui + cs * vj;
      }
    }
    double now = varimax_criterion(L);
    if (std::fabs(now - last) < tol * std::max(1.0, std::fabs(last))) break;
    last = now;
  }
  return L;
}

ThemeSolution extract_themes(const DocTermMatrix& dtm, int k,
                             double loading_threshold) {
  const Eigen::Index n = dtm.cells.rows();
  const Eigen::Index p_all = dtm.cells.cols();
  if (n < 3) throw AnalysisError("extract_themes: need at least 3 documents");

  ThemeSolution sol;
  sol.loading_threshold = loading_threshold;
  sol.doc_ids = dtm.doc_ids;

  // drop zero-variance columns, keep the rest standardized
  std::vector<Eigen::Index> keep;
  Eigen::MatrixXd Z(n, p_all);
  for (Eigen::Index j = 0; j < p_all; ++j) {
    double mean = dtm.cells.col(j).mean();
    Eigen::VectorXd centered = dtm.cells.col(j).array() - mean;
    double sd = std::sqrt(centered.squaredNorm() / (n - 1.0));
    if (sd > 0.0) {
      Z.col(keep.size()) = centered / sd;
      keep.push_back(j);
      sol.terms.push_back(dtm.terms[j]);
    } else {
      sol.dropped_terms.push_back(dtm.terms[j]);
    }
  }
  const Eigen::Index p = static_cast<Eigen::Index>(keep.size());
  if (p < 2) {
    throw AnalysisError("extract_themes: fewer than 2 variable terms");
  }
  Z.conservativeResize(n, p);
  Eigen::MatrixXd corr = (Z.transpose() * Z) / (n - 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.info() != Eigen::Success) {
    throw AnalysisError("extract_themes: eigendecomposition failed");
  }
  // eigenvalues ascending from Eigen; store descending
  Eigen::VectorXd evals = eig.eigenvalues().reverse();
  Eigen::MatrixXd evecs = eig.eigenvectors().rowwise().reverse();
  sol.eigenvalues.assign(evals.data(), evals.data() + evals.size());

  Eigen::Index rank = 0;
  double cutoff = std::max(1e-10, evals(0) * 1e-12);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (evals(i) > cutoff) ++rank;
  }
  if (k < 0) {
    k = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (evals(i) > 1.0) ++k;
    }
    if (k == 0) k = 1;
  }
  if (k > rank) {
    throw AnalysisError("extract_themes: k=" + std::to_string(k) +
                        " exceeds matrix rank " + std::to_string(rank));
  }
  sol.k = k;

  Eigen::MatrixXd unrotated(p, k);
  for (int j = 0; j < k; ++j) {
    unrotated.col(j) = evecs.col(j) * std::sqrt(std::max(0.0, evals(j)));
  }
  Eigen::MatrixXd L = varimax(unrotated, 1e-6);

  // sign convention: the largest-magnitude loading in each column positive
  for (int j = 0; j < k; ++j) {
    Eigen::Index at = 0;
    L.col(j).cwiseAbs().maxCoeff(&at);
    if (L(at, j) < 0.0) L.col(j) = -L.col(j);
  }
  // order components by explained variance descending
  std::vector<int> order(k);
  for (int j = 0; j < k; ++j) order[j] = j;
  std::vector<double> ss(k);
  for (int j = 0; j < k; ++j) ss[j] = L.col(j).squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ss[a] > ss[b]; });
  Eigen::MatrixXd ordered(p, k);
  sol.explained_variance.resize(k);
  for (int j = 0; j < k; ++j) {
    ordered.col(j) = L.col(order[j]);
    sol.explained_variance[j] = ss[order[j]];
  }
  sol.loadings = ordered;

  // theme scores: mean occurrence of the terms passing the threshold
  sol.theme_scores = Eigen::MatrixXd::Zero(n, k);
  for (int j = 0; j < k; ++j) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index t = 0; t < p; ++t) {
      if (std::fabs(sol.loadings(t, j)) >= loading_threshold) {
        members.push_back(keep[t]);
      }
    }
    if (members.empty()) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      double sum = 0.0;
      for (Eigen::Index t : members) sum += dtm.cells(i, t);
      sol.theme_scores(i, j) = sum / static_cast<double>(members.size());
    }
  }
  return sol;
}

stats::OlsFit theme_covariate_model(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& group,
                                    const Eigen::MatrixXd& themes,
                                    const Eigen::MatrixXd& extra) {
  const Eigen::Index n = y.size();
  if (group.size() != n ||
      (themes.size() > 0 && themes.rows() != n) ||
      (extra.size() > 0 && extra.rows() != n)) {
    throw AnalysisError("theme_covariate_model: row count mismatch");
  }
  auto check_variance = [](const Eigen::MatrixXd& m, const char* label) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double mean = m.col(j).mean();
      double ss = (m.col(j).array() - mean).square().sum();
      if (!(ss > 0.0)) {
        throw AnalysisError(std::string("theme_covariate_model: zero-"
                                        "variance column ") +
                            label + "_" + std::to_string(j + 1));
      }
    }
  };
  check_variance(themes, "theme");
  check_variance(extra, "covariate");
  Eigen::Index p = 2 + themes.cols() + extra.cols();
  Eigen::MatrixXd X(n, p);
  X.col(0).setOnes();
  X.col(1) = group;
  if (themes.cols() > 0) X.middleCols(2, themes.cols()) = themes;
  if (extra.cols() > 0) X.rightCols(extra.cols()) = extra;
  return stats::ols(y, X);
}

void write_loadings_csv(const std::string& path, const ThemeSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  std::vector<std::string> header{"term"};
  for (int j = 0; j < sol.k; ++j) {
    header.push_back("component_" + std::to_string(j + 1));
  }
  out << csv::join(header) << "\n";
  for (std::size_t t = 0; t < sol.terms.size(); ++t) {
    std::vector<std::string> row{sol.terms[t]};
    for (int j = 0; j < sol.k; ++j) {
      row.push_back(format_double(sol.loadings(t, j)));
    }
    out << csv::join(row) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_theme_scores_csv(const std::string& path,
                            const ThemeSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  std::vector<std::string> header{"doc"};
  for (int j = 0; j < sol.k; ++j) {
    header.push_back("theme_" + std::to_string(j + 1));
  }
  out << csv::join(header) << "\n";
  for (Eigen::Index i = 0; i < sol.theme_scores.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(sol.k + 1);
    row.push_back(i < static_cast<Eigen::Index>(sol.doc_ids.size())
                      ? sol.doc_ids[i]
                      : std::to_string(i));
    for (int j = 0; j < sol.k; ++j) {
      row.push_back(format_double(sol.theme_scores(i, j)));
    }
    out << csv::join(row) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string theme_report(const ThemeSolution& sol, int top_terms) {
  std::string report;
  for (int j = 0; j < sol.k; ++j) {
    report += "Theme " + std::to_string(j + 1) + " (variance " +
              format_fixed(sol.explained_variance[j], 3) + "):";
    std::vector<std::size_t> idx(sol.terms.size());
    for (std::size_t t = 0; t < idx.size(); ++t) idx[t] = t;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(sol.loadings(a, j)) > std::fabs(sol.loadings(b, j));
    });
    int shown = 0;
    for (std::size_t t : idx) {
      if (shown >= top_terms) break;
      if (std::fabs(sol.loadings(t, j)) < sol.loading_threshold) break;
      report += " " + sol.terms[t] + " (" +
                format_fixed(sol.loadings(t, j), 2) + ")";
      ++shown;
    }
    if (shown == 0) report += " (no terms above threshold)";
    report += "\n";
  }
  if (!sol.dropped_terms.empty()) {
    report += "Dropped zero-variance terms:";
    for (const auto& t : sol.dropped_terms) report += " " + t;
    report += "\n";
  }
  return report;
}

}  // namespace simtext::mem
