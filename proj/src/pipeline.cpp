#include "simtext/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "simtext/error.hpp"
#include "simtext/format.hpp"
#include "simtext/hash.hpp"
#include "simtext/rng.hpp"

namespace simtext::pipeline {

namespace {

using corpus::Corpus;
using corpus::Document;
using corpus::Kind;
using metrics::ScoreCard;

const char* const kContentCovariates[] = {"affect", "cognition", "political",
                                          "physical"};

struct MeasureDef {
  const char* name;
  double ScoreCard::*field;
};

const MeasureDef kMeasures[] = {
    {"simplicity_index", &ScoreCard::simplicity_z},
    {"common_words", &ScoreCard::common_pct},
    {"analytic_writing", &ScoreCard::analytic_scaled},
    {"readability", &ScoreCard::flesch},
};

std::vector<double> extract(const std::vector<ScoreCard>& cards,
                            std::size_t begin, std::size_t end,
                            double ScoreCard::*field) {
  std::vector<double> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(cards[i].*field);
  return out;
}

// Scores group B followed by group A, standardizes the simplicity index over
// the pooled cards, and appends the four comparisons (A minus B direction).
void append_comparisons(std::vector<stats::ComparisonReport>& out,
                        const std::string& label_a,
                        const std::vector<const Document*>& group_a,
                        const std::string& label_b,
                        const std::vector<const Document*>& group_b,
                        const lexicon::Lexicon& lex,
                        const lexicon::CommonWordList& common,
                        const metrics::AnalyticScaling& scaling,
                        std::size_t replicates, std::uint64_t seed,
                        std::uint64_t substream_base, int jobs,
                        std::vector<ScoreCard>* cards_out = nullptr) {
  Corpus sub;
  for (const Document* doc : group_b) sub.add(*doc);
  for (const Document* doc : group_a) sub.add(*doc);
  auto cards = metrics::score_corpus(sub, lex, common, scaling, jobs);
  metrics::simplicity_index(cards);
  const std::size_t nb = group_b.size();
  const std::size_t total = cards.size();
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& m = kMeasures[k];
    out.push_back(stats::compare_groups(
        m.name, label_a, extract(cards, nb, total, m.field), label_b,
        extract(cards, 0, nb, m.field), replicates,
        substream_seed(seed, substream_base + k), jobs));
  }
  if (cards_out != nullptr) *cards_out = std::move(cards);
}

bool column_constant(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) != v(0)) return false;
  }
  return true;
}

RobustnessModel make_block(const std::string& label, const stats::OlsFit& fit,
                           std::size_t covariates) {
  RobustnessModel model;
  model.label = label;
  model.group_beta = fit.beta(1);
  model.group_se = fit.se(1);
  model.group_t = fit.t[1];
  model.group_p = fit.p[1];
  model.r2 = fit.r2;
  model.covariates = covariates;
  return model;
}

// Robustness ladder for the simplicity-index group effect: group-only OLS,
// then content covariates, then content + extracted themes.
Robustness run_robustness(const Corpus& sub, const std::vector<ScoreCard>& cards,
                          std::size_t n_baseline,
                          const GenerationOptions& options) {
  Robustness out;
  out.attempted = true;

  const auto n = static_cast<Eigen::Index>(cards.size());
  Eigen::VectorXd y(n);
  Eigen::VectorXd group(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = cards[static_cast<std::size_t>(i)].simplicity_z;
    group(i) = static_cast<std::size_t>(i) < n_baseline ? 0.0 : 1.0;
  }

  std::vector<std::string> content_names;
  std::vector<Eigen::VectorXd> content_cols;
  for (const char* name : kContentCovariates) {
    Eigen::VectorXd col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& cats = cards[static_cast<std::size_t>(i)].categories;
      const auto it = cats.find(name);
      if (it == cats.end()) {
        throw AnalysisError(std::string("robustness needs lexicon category \"") +
                            name + "\"");
      }
      col(i) = it->second;
    }
    if (column_constant(col)) {
      out.dropped_covariates.push_back(name);
    } else {
      content_names.push_back(name);
      content_cols.push_back(std::move(col));
    }
  }
  Eigen::MatrixXd content(n, static_cast<Eigen::Index>(content_cols.size()));
  for (std::size_t j = 0; j < content_cols.size(); ++j) {
    content.col(static_cast<Eigen::Index>(j)) = content_cols[j];
  }

  const Eigen::MatrixXd none(n, 0);
  const auto raw = mem::theme_covariate_model(y, group, none, none);
  out.unadjusted_beta = raw.beta(1);
  out.unadjusted_p = raw.p[1];

  const auto with_content = mem::theme_covariate_model(y, group, none, content);
  out.models.push_back(make_block("content_covariates", with_content,
                                  content_cols.size()));

  try {
    const auto dtm = mem::build_dtm(sub, options.stoplist,
                                    options.min_doc_fraction);
    const auto sol = mem::extract_themes(dtm, options.themes_k);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < sol.theme_scores.cols(); ++j) {
      if (!column_constant(sol.theme_scores.col(j))) kept.push_back(j);
    }
    Eigen::MatrixXd themes(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
      themes.col(static_cast<Eigen::Index>(j)) = sol.theme_scores.col(kept[j]);
    }
    const auto with_themes =
        mem::theme_covariate_model(y, group, themes, content);
    out.models.push_back(make_block("content_plus_themes", with_themes,
                                    content_cols.size() + kept.size()));
    out.themes_available = true;
    out.theme_count = static_cast<int>(kept.size());
  } catch (const AnalysisError& e) {
    out.warning = std::string("theme extraction skipped: ") + e.what();
  }
  return out;
}

nlohmann::json summary_json(const stats::GroupSummary& s,
                            const std::string& label) {
  nlohmann::json j;
  j["label"] = label;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  return j;
}

nlohmann::json comparison_json(const stats::ComparisonReport& c) {
  nlohmann::json j;
  j["measure"] = c.measure;
  j["group_a"] = summary_json(c.a, c.group_a);
  j["group_b"] = summary_json(c.b, c.group_b);
  j["t"] = c.t;
  j["df"] = c.df;
  j["p"] = c.p;
  j["d"] = c.d;
  if (c.has_ci) {
    j["d_ci"] = nlohmann::json{{"lower", c.d_ci.lower},
                               {"upper", c.d_ci.upper}};
    j["replicates"] = c.replicates;
  } else {
    j["d_ci"] = nullptr;
    j["replicates"] = 0;
  }
  return j;
}

nlohmann::json fit_to_json(const lmm::MixedModelFit& fit) {
  return nlohmann::json::parse(lmm::fit_json(fit));
}

std::string hash_config(const nlohmann::json& config) {
  return hex64(fnv1a64(config.dump()));
}

nlohmann::json scaling_json(const metrics::AnalyticScaling& s) {
  return nlohmann::json{{"mu0", s.mu0}, {"sigma0", s.sigma0}};
}

std::string p_text(double p) {
  if (p < 0.001) return "< .001";
  return "= " + format_fixed(p, 3);
}

}  // namespace

std::string report_json(const StudyReport& report) {
  nlohmann::json j;
  j["schema_version"] = report.schema_version;
  j["study"] = report.study;
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  auto comps = nlohmann::json::array();
  for (const auto& c : report.comparisons) comps.push_back(comparison_json(c));
  j["comparisons"] = comps;

  if (report.robustness.attempted) {
    nlohmann::json r;
    r["unadjusted_beta"] = report.robustness.unadjusted_beta;
    r["unadjusted_p"] = report.robustness.unadjusted_p;
    r["themes_available"] = report.robustness.themes_available;
    r["theme_count"] = report.robustness.theme_count;
    r["warning"] = report.robustness.warning;
    r["dropped_covariates"] = report.robustness.dropped_covariates;
    auto models = nlohmann::json::array();
    for (const auto& m : report.robustness.models) {
      nlohmann::json mj;
      mj["label"] = m.label;
      mj["group_beta"] = m.group_beta;
      mj["group_se"] = m.group_se;
      mj["group_t"] = m.group_t;
      mj["group_p"] = m.group_p;
      mj["r2"] = m.r2;
      mj["covariates"] = m.covariates;
      models.push_back(mj);
    }
    r["models"] = models;
    j["robustness"] = r;
  } else {
    j["robustness"] = nullptr;
  }

  if (report.generation.attempted) {
    nlohmann::json g;
    g["accepted"] = report.generation.accepted;
    g["rejected"] = report.generation.rejected;
    g["transport_errors"] = report.generation.transport_errors;
    g["resumed"] = report.generation.resumed;
    g["requests_issued"] = report.generation.requests_issued;
    j["generation"] = g;
  } else {
    j["generation"] = nullptr;
  }

  if (report.experiment.present) {
    nlohmann::json e;
    e["n_rows"] = report.experiment.n_rows;
    auto fits = nlohmann::json::array();
    for (const auto& f : report.experiment.fits) {
      nlohmann::json fj;
      fj["outcome"] = f.outcome;
      fj["fit"] = fit_to_json(f.fit);
      fits.push_back(fj);
    }
    e["fits"] = fits;
    e["has_perception"] = report.experiment.has_perception;
    e["perception_warning"] = report.experiment.perception_warning;
    if (report.experiment.has_perception) {
      e["perception_items"] = report.experiment.perception_items;
      e["alpha"] = report.experiment.alpha;
      e["perception_fit"] = fit_to_json(report.experiment.perception_fit);
    }
    auto corr = nlohmann::json::array();
    for (const auto& c : report.experiment.correlations) {
      nlohmann::json cj;
      cj["a"] = c.a;
      cj["b"] = c.b;
      cj["r"] = c.r;
      cj["ci"] = nlohmann::json{{"lower", c.ci.lower}, {"upper", c.ci.upper}};
      corr.push_back(cj);
    }
    e["correlations"] = corr;
    e["correlation_labels"] = report.experiment.correlation_labels;
    j["experiment"] = e;
  } else {
    j["experiment"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string report_text(const StudyReport& report) {
  std::ostringstream out;
  out << "study: " << report.study << "\n";
  out << "seed: " << report.seed << "  config: " << report.config_hash
      << "\n";
  for (const auto& c : report.comparisons) {
    out << c.measure << ": " << c.group_a << " (M = "
        << format_fixed(c.a.mean, 2) << ", SD = " << format_fixed(c.a.sd, 2)
        << ", n = " << c.a.n << ") vs " << c.group_b << " (M = "
        << format_fixed(c.b.mean, 2) << ", SD = " << format_fixed(c.b.sd, 2)
        << ", n = " << c.b.n << "): t(" << format_fixed(c.df, 1) << ") = "
        << format_fixed(c.t, 2) << ", p " << p_text(c.p) << ", d = "
        << format_fixed(c.d, 2);
    if (c.has_ci) {
      out << ", 95% CI [" << format_fixed(c.d_ci.lower, 2) << ", "
          << format_fixed(c.d_ci.upper, 2) << "]";
    }
    out << "\n";
  }
  if (report.robustness.attempted) {
    out << "robustness (simplicity index): unadjusted B = "
        << format_fixed(report.robustness.unadjusted_beta, 3) << ", p "
        << p_text(report.robustness.unadjusted_p) << "\n";
    for (const auto& m : report.robustness.models) {
      out << "  " << m.label << ": B = " << format_fixed(m.group_beta, 3)
          << ", SE = " << format_fixed(m.group_se, 3) << ", t = "
          << format_fixed(m.group_t, 2) << ", p " << p_text(m.group_p)
          << " (" << m.covariates << " covariates)\n";
    }
    if (!report.robustness.warning.empty()) {
      out << "  warning: " << report.robustness.warning << "\n";
    }
  }
  if (report.generation.attempted) {
    out << "generation: accepted " << report.generation.accepted
        << ", rejected " << report.generation.rejected
        << ", transport errors " << report.generation.transport_errors
        << ", resumed " << report.generation.resumed << ", requests "
        << report.generation.requests_issued << "\n";
  }
  if (report.experiment.present) {
    out << "rows: " << report.experiment.n_rows << "\n";
    for (const auto& f : report.experiment.fits) {
      const auto& fit = f.fit;
      out << f.outcome << ": B = " << format_fixed(fit.beta(1), 2)
          << ", SE = " << format_fixed(fit.se(1), 2) << ", t = "
          << format_fixed(fit.t(1), 2) << ", p " << p_text(fit.p(1))
          << ", R2m = " << format_fixed(fit.r2m, 3) << ", R2c = "
          << format_fixed(fit.r2c, 3) << "\n";
    }
    if (report.experiment.has_perception) {
      out << "perception alpha = " << format_fixed(report.experiment.alpha, 3)
          << "; index model: B = "
          << format_fixed(report.experiment.perception_fit.beta(1), 2)
          << ", p " << p_text(report.experiment.perception_fit.p(1)) << "\n";
    } else if (!report.experiment.perception_warning.empty()) {
      out << "perception: " << report.experiment.perception_warning << "\n";
    }
    for (const auto& c : report.experiment.correlations) {
      out << "r(" << c.a << ", " << c.b << ") = " << format_fixed(c.r, 2)
          << " [" << format_fixed(c.ci.lower, 2) << ", "
          << format_fixed(c.ci.upper, 2) << "]\n";
    }
  }
  return out.str();
}

StudyReport run_yoked_comparison(const Corpus& corpus,
                                 const lexicon::Lexicon& lex,
                                 const lexicon::CommonWordList& common,
                                 const YokedOptions& options) {
  if (options.lay_kind == Kind::abstract) {
    throw AnalysisError("lay kind cannot be abstract");
  }
  const auto pairs = corpus.yoke(options.lay_kind);
  if (pairs.size() < 2) {
    throw AnalysisError("need at least 2 yoked pairs, got " +
                        std::to_string(pairs.size()));
  }
  std::vector<const Document*> lays;
  std::vector<const Document*> abstracts;
  for (const auto& pair : pairs) {
    abstracts.push_back(&pair.abstract);
    lays.push_back(&pair.lay);
  }

  StudyReport report;
  report.study = "yoked_comparison";
  report.seed = options.seed;
  nlohmann::json config;
  config["study"] = report.study;
  config["lay_kind"] = corpus::kind_name(options.lay_kind);
  config["replicates"] = options.replicates;
  config["seed"] = options.seed;
  config["scaling"] = scaling_json(options.scaling);
  report.config_hash = hash_config(config);

  append_comparisons(report.comparisons, corpus::kind_name(options.lay_kind),
                     lays, "abstract", abstracts, lex, common, options.scaling,
                     options.replicates, options.seed, 0, options.jobs);
  return report;
}

StudyReport run_generation_comparison(const Corpus& corpus,
                                      const lexicon::Lexicon& lex,
                                      const lexicon::CommonWordList& common,
                                      const GenerationOptions& options) {
  if (options.baseline_kind == Kind::ai_lay) {
    throw AnalysisError("baseline kind cannot be ai_lay");
  }
  const auto ai = corpus.with_kind(Kind::ai_lay);
  const auto baseline = corpus.with_kind(options.baseline_kind);
  if (ai.size() < 2 || baseline.size() < 2) {
    throw AnalysisError(
        "need at least 2 documents per group, got " +
        std::to_string(ai.size()) + " ai_lay and " +
        std::to_string(baseline.size()) + " " +
        corpus::kind_name(options.baseline_kind));
  }

  StudyReport report;
  report.study = "generation_comparison";
  report.seed = options.seed;
  nlohmann::json config;
  config["study"] = report.study;
  config["baseline_kind"] = corpus::kind_name(options.baseline_kind);
  config["compare_abstracts"] = options.compare_abstracts;
  config["robustness"] = options.robustness;
  config["replicates"] = options.replicates;
  config["seed"] = options.seed;
  config["scaling"] = scaling_json(options.scaling);
  config["min_doc_fraction"] = options.min_doc_fraction;
  config["themes_k"] = options.themes_k;
  config["stoplist_size"] = options.stoplist.size();
  report.config_hash = hash_config(config);

  std::vector<ScoreCard> cards;
  append_comparisons(report.comparisons, "ai_lay", ai,
                     corpus::kind_name(options.baseline_kind), baseline, lex,
                     common, options.scaling, options.replicates, options.seed,
                     0, options.jobs, &cards);

  if (options.robustness) {
    Corpus sub;
    for (const Document* doc : baseline) sub.add(*doc);
    for (const Document* doc : ai) sub.add(*doc);
    report.robustness = run_robustness(sub, cards, baseline.size(), options);
  }

  if (options.compare_abstracts && options.baseline_kind != Kind::abstract) {
    const auto abstracts = corpus.with_kind(Kind::abstract);
    if (abstracts.size() >= 2) {
      append_comparisons(report.comparisons, "ai_lay", ai, "abstract",
                         abstracts, lex, common, options.scaling,
                         options.replicates, options.seed, 4, options.jobs);
    }
  }
  return report;
}

StudyReport run_generation_comparison(const Corpus& corpus,
                                      genai::ChatTransport& transport,
                                      const genai::GenerationConfig& config,
                                      const std::string& audit_path,
                                      const lexicon::Lexicon& lex,
                                      const lexicon::CommonWordList& common,
                                      const GenerationOptions& options) {
  if (!corpus.with_kind(Kind::ai_lay).empty()) {
    throw AnalysisError(
        "corpus already contains ai_lay documents; drop them or run the "
        "comparison without generation");
  }
  Corpus abstracts;
  for (const Document* doc : corpus.with_kind(Kind::abstract)) {
    abstracts.add(*doc);
  }
  const auto outcome =
      genai::batch_generate(abstracts, transport, config, audit_path);

  Corpus merged = corpus;
  for (const auto& doc : outcome.documents.documents()) merged.add(doc);

  StudyReport report = run_generation_comparison(merged, lex, common, options);
  report.generation.attempted = true;
  report.generation.accepted = outcome.accepted;
  report.generation.rejected = outcome.rejected;
  report.generation.transport_errors = outcome.transport_errors;
  report.generation.resumed = outcome.resumed;
  report.generation.requests_issued = outcome.requests_issued;

  nlohmann::json cfg;
  cfg["analysis_hash"] = report.config_hash;
  cfg["model"] = config.model;
  cfg["temperature"] = config.temperature;
  cfg["word_limit"] = config.word_limit;
  cfg["max_retries"] = config.max_retries;
  report.config_hash = hash_config(cfg);
  return report;
}

StudyReport run_summary_comparison(const std::string& study,
                                   const std::string& label_a,
                                   const std::string& label_b,
                                   const std::vector<SummaryInput>& measures) {
  if (study != "yoked_comparison" && study != "generation_comparison") {
    throw AnalysisError("summary mode supports yoked_comparison or "
                        "generation_comparison, got \"" + study + "\"");
  }
  if (measures.empty()) {
    throw AnalysisError("summary mode needs at least one measure");
  }
  StudyReport report;
  report.study = study;
  report.seed = 0;
  nlohmann::json config;
  config["study"] = study;
  config["label_a"] = label_a;
  config["label_b"] = label_b;
  auto ms = nlohmann::json::array();
  for (const auto& m : measures) {
    ms.push_back(nlohmann::json{{"measure", m.measure},
                                {"a", {m.a.n, m.a.mean, m.a.sd}},
                                {"b", {m.b.n, m.b.mean, m.b.sd}}});
  }
  config["measures"] = ms;
  report.config_hash = hash_config(config);

  for (const auto& m : measures) {
    report.comparisons.push_back(
        stats::compare_summaries(m.measure, label_a, m.a, label_b, m.b));
  }
  return report;
}

namespace {

double parse_cell(const lmm::TrialTable& table, std::size_t row,
                  std::size_t col, const std::string& column) {
  const std::string& text = table.rows[row][col];
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    throw IoError(table.origin + ":" + std::to_string(table.row_lines[row]) +
                  ": non-numeric value \"" + text + "\" in column \"" +
                  column + "\"");
  }
  return value;
}

std::vector<double> parse_column(const lmm::TrialTable& table,
                                 const std::string& column) {
  const std::size_t c = table.column(column);
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out.push_back(parse_cell(table, r, c, column));
  }
  return out;
}

}  // namespace

StudyReport run_experiment_analysis(const lmm::TrialTable& table,
                                    const ExperimentOptions& options) {
  std::vector<std::string> outcomes = options.outcomes;
  if (outcomes.empty()) {
    for (const auto& col : table.columns) {
      if (col != options.participant_col && col != options.stimulus_col &&
          col != options.condition_col) {
        outcomes.push_back(col);
      }
    }
  }
  if (outcomes.empty()) {
    throw AnalysisError(table.origin + ": no outcome columns");
  }

  StudyReport report;
  report.study = "experiment_analysis";
  report.seed = 0;
  nlohmann::json config;
  config["study"] = report.study;
  config["outcomes"] = outcomes;
  config["perception_items"] = options.perception_items;
  config["condition"] = options.condition_col;
  report.config_hash = hash_config(config);

  report.experiment.present = true;
  report.experiment.n_rows = table.rows.size();

  for (const auto& outcome : outcomes) {
    lmm::MixedData data =
        lmm::build_mixed_data(table, outcome, {options.condition_col},
                              options.participant_col, options.stimulus_col);
    report.experiment.fits.push_back(OutcomeFit{outcome, lmm::fit_lmm(data)});
  }

  // perception battery: Cronbach's alpha plus a model of the averaged index
  const auto& items = options.perception_items;
  std::string missing;
  for (const auto& item : items) {
    if (std::find(table.columns.begin(), table.columns.end(), item) ==
        table.columns.end()) {
      missing = item;
      break;
    }
  }
  if (items.size() < 2) {
    report.experiment.perception_warning =
        "perception battery needs at least 2 items";
  } else if (!missing.empty()) {
    report.experiment.perception_warning =
        "column \"" + missing + "\" not found; perception battery skipped";
  } else {
    std::vector<std::vector<double>> columns;
    for (const auto& item : items) columns.push_back(parse_column(table, item));
    report.experiment.alpha = stats::cronbach_alpha(columns);
    report.experiment.perception_items = items;

    lmm::MixedData data =
        lmm::build_mixed_data(table, items[0], {options.condition_col},
                              options.participant_col, options.stimulus_col);
    for (Eigen::Index i = 0; i < data.y.size(); ++i) {
      double sum = 0.0;
      for (const auto& col : columns) sum += col[static_cast<std::size_t>(i)];
      data.y(i) = sum / static_cast<double>(columns.size());
    }
    report.experiment.perception_fit = lmm::fit_lmm(data);
    report.experiment.has_perception = true;
  }

  // trial-level correlation matrix over the outcomes (plus the averaged
  // index when available)
  std::vector<std::string> labels = outcomes;
  std::vector<std::vector<double>> series;
  for (const auto& outcome : outcomes) {
    series.push_back(parse_column(table, outcome));
  }
  if (report.experiment.has_perception) {
    std::vector<double> index(table.rows.size(), 0.0);
    std::vector<std::vector<double>> columns;
    for (const auto& item : items) columns.push_back(parse_column(table, item));
    for (std::size_t r = 0; r < index.size(); ++r) {
      double sum = 0.0;
      for (const auto& col : columns) sum += col[r];
      index[r] = sum / static_cast<double>(columns.size());
    }
    labels.push_back("perception_index");
    series.push_back(std::move(index));
  }
  report.experiment.correlation_labels = labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      CorrelationEntry entry;
      entry.a = labels[i];
      entry.b = labels[j];
      entry.r = stats::pearson_r(series[i], series[j]);
      if (std::abs(entry.r) < 1.0) {
        entry.ci = stats::fisher_ci(entry.r, table.rows.size());
      } else {
        entry.ci = {entry.r, entry.r};  // degenerate at perfect correlation
      }
      report.experiment.correlations.push_back(entry);
    }
  }
  return report;
}

}  // namespace simtext::pipeline
