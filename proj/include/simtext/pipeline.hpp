#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "simtext/corpus.hpp"
#include "simtext/genai.hpp"
#include "simtext/lexicon.hpp"
#include "simtext/lmm.hpp"
#include "simtext/mem.hpp"
#include "simtext/stats.hpp"
#include "simtext/textmetrics.hpp"

// End-to-end study workflows: score-and-compare on yoked corpora, the
// AI-generation comparison with content/theme robustness checks, and the
// trial-level mixed-model battery.

namespace simtext::pipeline {

inline constexpr int kSchemaVersion = 1;

// One regression block of the robustness ladder; blocks are cumulative
// (content covariates first, then content + themes).
struct RobustnessModel {
  std::string label;
  double group_beta = 0.0;
  double group_se = 0.0;
  double group_t = 0.0;
  double group_p = 1.0;
  double r2 = 0.0;
  std::size_t covariates = 0;  // regressors beyond intercept and group
};

struct Robustness {
  bool attempted = false;
  bool themes_available = false;
  std::string warning;                    // set when themes were skipped
  double unadjusted_beta = 0.0;           // group-only reference model
  double unadjusted_p = 1.0;
  int theme_count = 0;
  std::vector<std::string> dropped_covariates;  // constant in this corpus
  std::vector<RobustnessModel> models;
};

struct GenerationStats {
  bool attempted = false;
  int accepted = 0;
  int rejected = 0;
  int transport_errors = 0;
  int resumed = 0;
  int requests_issued = 0;
};

struct OutcomeFit {
  std::string outcome;
  lmm::MixedModelFit fit;
};

struct CorrelationEntry {
  std::string a;
  std::string b;
  double r = 0.0;
  stats::Interval ci;
};

struct ExperimentSummary {
  bool present = false;
  std::size_t n_rows = 0;
  std::vector<OutcomeFit> fits;
  bool has_perception = false;
  std::string perception_warning;
  std::vector<std::string> perception_items;
  double alpha = 0.0;                     // Cronbach over the perception items
  lmm::MixedModelFit perception_fit;      // model of the averaged index
  std::vector<std::string> correlation_labels;
  std::vector<CorrelationEntry> correlations;  // upper triangle, row-major
};

struct StudyReport {
  std::string study;  // yoked_comparison | generation_comparison | experiment_analysis
  std::uint64_t seed = 0;
  std::string config_hash;
  int schema_version = kSchemaVersion;
  std::vector<stats::ComparisonReport> comparisons;
  Robustness robustness;
  GenerationStats generation;
  ExperimentSummary experiment;
};

// Stable JSON rendering (byte-identical for identical inputs and seed).
std::string report_json(const StudyReport& report);

// Plain-text rendering in the t(df)/d/B-SE-t-p reporting style.
std::string report_text(const StudyReport& report);

struct YokedOptions {
  corpus::Kind lay_kind = corpus::Kind::human_lay;
  std::size_t replicates = stats::kDefaultBootstrapReplicates;
  std::uint64_t seed = 0;
  int jobs = 1;
  metrics::AnalyticScaling scaling;
};

// Scores every yoked document, standardizes the simplicity index over the
// pooled cards, and reports the four comparisons (index, common words,
// analytic writing, readability) with bootstrap CIs.
StudyReport run_yoked_comparison(const corpus::Corpus& corpus,
                                 const lexicon::Lexicon& lex,
                                 const lexicon::CommonWordList& common,
                                 const YokedOptions& options);

struct GenerationOptions {
  corpus::Kind baseline_kind = corpus::Kind::human_lay;
  bool compare_abstracts = false;  // add a second comparison set vs abstracts
  bool robustness = true;
  std::size_t replicates = stats::kDefaultBootstrapReplicates;
  std::uint64_t seed = 0;
  int jobs = 1;
  metrics::AnalyticScaling scaling;
  std::set<std::string> stoplist;  // theme extraction
  double min_doc_fraction = 0.05;
  int themes_k = -1;               // -1 selects eigenvalue > 1
};

// Compares AI statements already present in the corpus against the baseline
// kind; optionally checks robustness of the simplicity-index group effect to
// content covariates (affect, cognition, political, physical) and themes.
StudyReport run_generation_comparison(const corpus::Corpus& corpus,
                                      const lexicon::Lexicon& lex,
                                      const lexicon::CommonWordList& common,
                                      const GenerationOptions& options);

// Generates the AI statements first (resuming from the audit file), merges
// the accepted ones into the corpus, then runs the comparison above.
StudyReport run_generation_comparison(const corpus::Corpus& corpus,
                                      genai::ChatTransport& transport,
                                      const genai::GenerationConfig& config,
                                      const std::string& audit_path,
                                      const lexicon::Lexicon& lex,
                                      const lexicon::CommonWordList& common,
                                      const GenerationOptions& options);

// Published-moments mode: reproduces the reported t/df/p/d from (M, SD, n)
// triplets alone; no bootstrap is possible.
struct SummaryInput {
  std::string measure;
  stats::GroupSummary a;
  stats::GroupSummary b;
};

StudyReport run_summary_comparison(const std::string& study,
                                   const std::string& label_a,
                                   const std::string& label_b,
                                   const std::vector<SummaryInput>& measures);

struct ExperimentOptions {
  std::vector<std::string> outcomes;  // empty = every non-structural column
  std::vector<std::string> perception_items = {"intelligent", "credible",
                                               "trustworthy"};
  std::string condition_col = "condition";
  std::string participant_col = "participant";
  std::string stimulus_col = "stimulus";
};

// Fits the crossed random-intercept model per outcome, Cronbach's alpha and
// a mixed model for the averaged perception index, and the trial-level
// correlation matrix with Fisher CIs.
StudyReport run_experiment_analysis(const lmm::TrialTable& table,
                                    const ExperimentOptions& options);

}  // namespace simtext::pipeline
