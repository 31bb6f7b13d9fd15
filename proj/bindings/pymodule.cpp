// Python bindings for the main simtext operations: document scoring, the
// statistical battery, mixed models, theme extraction, and the study
// pipelines.  Structured results come back as plain dicts/lists so they drop
// straight into pandas or json.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "json.hpp"
#include "simtext/corpus.hpp"
#include "simtext/error.hpp"
#include "simtext/genai.hpp"
#include "simtext/lexicon.hpp"
#include "simtext/lmm.hpp"
#include "simtext/mem.hpp"
#include "simtext/pipeline.hpp"
#include "simtext/stats.hpp"
#include "simtext/textmetrics.hpp"

namespace py = pybind11;
using namespace simtext;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::null:
      return py::none();
    case value_t::boolean:
      return py::bool_(j.get<bool>());
    case value_t::number_integer:
      return py::int_(j.get<long long>());
    case value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case value_t::number_float:
      return py::float_(j.get<double>());
    case value_t::string:
      return py::str(j.get<std::string>());
    case value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) {
        out[py::str(key)] = json_to_py(value);
      }
      return out;
    }
    default:
      return py::none();
  }
}

corpus::Kind kind_from(const std::string& name) {
  corpus::Kind kind;
  if (!corpus::parse_kind(name, kind)) {
    throw AnalysisError("unknown document kind \"" + name +
                        "\" (expected abstract, human_lay, or ai_lay)");
  }
  return kind;
}

py::dict card_to_dict(const metrics::ScoreCard& card) {
  py::dict d;
  d["id"] = card.id;
  d["kind"] = corpus::kind_name(card.kind);
  d["word_count"] = card.word_count;
  d["common_pct"] = card.common_pct;
  d["analytic_raw"] = card.analytic_raw;
  d["analytic_scaled"] = card.analytic_scaled;
  d["flesch"] = card.flesch;
  if (card.has_simplicity) d["simplicity_z"] = card.simplicity_z;
  else d["simplicity_z"] = py::none();
  py::dict cats;
  for (const auto& [name, value] : card.categories) {
    cats[py::str(name)] = value;
  }
  d["categories"] = cats;
  return d;
}

stats::Design design_from(const std::string& name) {
  if (name == "t") return stats::Design::two_sample_t;
  if (name == "rm") return stats::Design::rm_anova_within;
  throw AnalysisError("design must be \"t\" or \"rm\", got \"" + name + "\"");
}

stats::RmConvention convention_from(const std::string& name) {
  if (name == "multivariate") return stats::RmConvention::multivariate;
  if (name == "univariate") return stats::RmConvention::univariate;
  throw AnalysisError(
      "convention must be \"multivariate\" or \"univariate\", got \"" + name +
      "\"");
}

stats::PowerRequest power_request(const std::string& design, double effect,
                                  double alpha, double power, int measurements,
                                  double rho, double epsilon,
                                  const std::string& convention) {
  stats::PowerRequest req;
  req.design = design_from(design);
  req.effect = effect;
  req.alpha = alpha;
  req.power = power;
  req.measurements = measurements;
  req.rho = rho;
  req.epsilon = epsilon;
  req.convention = convention_from(convention);
  return req;
}

py::dict report_to_dict(const pipeline::StudyReport& report) {
  return json_to_py(nlohmann::json::parse(pipeline::report_json(report)))
      .cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Corpus scoring, group comparison, mixed models, theme extraction, and "
      "study pipelines for measuring how simply scientific text is written.";
  m.attr("__version__") = "0.1.0";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const AnalysisError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  // -- scoring ------------------------------------------------------------
  m.def(
      "score_document",
      [](const std::string& text, const std::string& lexicon,
         const std::string& common_words, double mu0, double sigma0) {
        const auto lex = lexicon::Lexicon::load(lexicon);
        const auto common = lexicon::CommonWordList::load(common_words);
        const corpus::Document doc{"doc", corpus::Kind::abstract, text};
        return card_to_dict(
            metrics::score_document(doc, lex, common, {mu0, sigma0}));
      },
      py::arg("text"), py::arg("lexicon"), py::arg("common_words"),
      py::arg("mu0") = 0.0, py::arg("sigma0") = 20.0,
      "Score one text against a style lexicon and a common-word list.");

  m.def(
      "score_corpus",
      [](const std::string& path, const std::string& lexicon,
         const std::string& common_words, double mu0, double sigma0,
         int jobs) {
        const auto lex = lexicon::Lexicon::load(lexicon);
        const auto common = lexicon::CommonWordList::load(common_words);
        const auto corpus = corpus::Corpus::load(path);
        auto cards =
            metrics::score_corpus(corpus, lex, common, {mu0, sigma0}, jobs);
        if (cards.size() >= 2) metrics::simplicity_index(cards);
        py::list out;
        for (const auto& card : cards) out.append(card_to_dict(card));
        return out;
      },
      py::arg("path"), py::arg("lexicon"), py::arg("common_words"),
      py::arg("mu0") = 0.0, py::arg("sigma0") = 20.0, py::arg("jobs") = 1,
      "Score every document in a JSONL/CSV corpus file; with two or more "
      "documents the pooled simplicity index is filled in.");

  // -- statistics ---------------------------------------------------------
  m.def(
      "welch_t",
      [](double mean_a, double sd_a, std::size_t n_a, double mean_b,
         double sd_b, std::size_t n_b) {
        const stats::GroupSummary a{n_a, mean_a, sd_a};
        const stats::GroupSummary b{n_b, mean_b, sd_b};
        const auto w = stats::welch_t(a, b);
        py::dict d;
        d["t"] = w.t;
        d["df"] = w.df;
        d["p"] = w.p;
        d["d"] = stats::cohens_d(a, b);
        return d;
      },
      py::arg("mean_a"), py::arg("sd_a"), py::arg("n_a"), py::arg("mean_b"),
      py::arg("sd_b"), py::arg("n_b"),
      "Welch's t-test and Cohen's d from group summary statistics.");

  m.def(
      "bootstrap_d_ci",
      [](const std::vector<double>& a, const std::vector<double>& b,
         std::size_t replicates, std::uint64_t seed, int jobs) {
        const auto ci = stats::bootstrap_d_ci(a, b, replicates, seed, jobs);
        return py::make_tuple(ci.lower, ci.upper);
      },
      py::arg("a"), py::arg("b"),
      py::arg("replicates") = stats::kDefaultBootstrapReplicates,
      py::arg("seed"), py::arg("jobs") = 1,
      "95% percentile bootstrap interval for Cohen's d.");

  m.def(
      "fisher_ci",
      [](double r, std::size_t n) {
        const auto ci = stats::fisher_ci(r, n);
        return py::make_tuple(ci.lower, ci.upper);
      },
      py::arg("r"), py::arg("n"),
      "95% confidence interval for a correlation via the Fisher transform.");

  m.def("cronbach_alpha", &stats::cronbach_alpha, py::arg("items"),
        "Cronbach's alpha over item score vectors (one list per item).");

  m.def(
      "power_n",
      [](const std::string& design, double effect, double alpha, double power,
         int measurements, double rho, double epsilon,
         const std::string& convention) {
        return stats::power_n(power_request(design, effect, alpha, power,
                                            measurements, rho, epsilon,
                                            convention));
      },
      py::arg("design"), py::arg("effect"), py::arg("alpha") = 0.05,
      py::arg("power") = 0.80, py::arg("measurements") = 3,
      py::arg("rho") = 0.5, py::arg("epsilon") = 1.0,
      py::arg("convention") = "multivariate",
      "Smallest total sample size reaching the target power "
      "(design \"t\" or \"rm\").");

  m.def(
      "power_at",
      [](const std::string& design, double effect, long total_n, double alpha,
         int measurements, double rho, double epsilon,
         const std::string& convention) {
        return stats::power_at(power_request(design, effect, alpha, 0.80,
                                             measurements, rho, epsilon,
                                             convention),
                               total_n);
      },
      py::arg("design"), py::arg("effect"), py::arg("total_n"),
      py::arg("alpha") = 0.05, py::arg("measurements") = 3,
      py::arg("rho") = 0.5, py::arg("epsilon") = 1.0,
      py::arg("convention") = "multivariate",
      "Achieved power at a given total sample size.");

  m.def(
      "select_stimuli",
      [](const std::vector<std::tuple<std::string, double, double>>& pairs,
         std::size_t k) {
        std::vector<corpus::PairScore> scored;
        scored.reserve(pairs.size());
        for (const auto& [id, a, b] : pairs) scored.push_back({id, a, b});
        const auto chosen = corpus::select_stimuli(scored, k);
        py::list out;
        for (const auto& choice : chosen) {
          out.append(py::make_tuple(choice.id, choice.gap));
        }
        return out;
      },
      py::arg("pairs"), py::arg("k"),
      "Top-k (id, score_a, score_b) pairs by absolute score gap, "
      "descending.");

  m.def(
      "density_summary",
      [](const std::vector<double>& values, int bins) {
        const auto d = stats::density_summary(values, bins);
        py::dict out;
        out["bin_edges"] = d.bin_edges;
        out["counts"] = d.counts;
        out["kde_x"] = d.kde_x;
        out["kde_y"] = d.kde_y;
        out["bandwidth"] = d.bandwidth;
        out["kde_skipped"] = d.kde_skipped;
        out["warning"] = d.warning;
        return out;
      },
      py::arg("values"), py::arg("bins") = 30,
      "Histogram plus Gaussian-kernel density curve for a score sample.");

  // -- mixed models -------------------------------------------------------
  m.def(
      "fit_lmm",
      [](const std::string& csv_path, const std::string& response,
         const std::vector<std::string>& fixed, const std::string& participant,
         const std::string& stimulus) {
        const auto table = lmm::load_trial_table(csv_path);
        const auto data = lmm::build_mixed_data(table, response, fixed,
                                                participant, stimulus);
        const auto fit = lmm::fit_lmm(data);
        return json_to_py(nlohmann::json::parse(lmm::fit_json(fit)));
      },
      py::arg("csv_path"), py::arg("response"),
      py::arg("fixed") = std::vector<std::string>{"condition"},
      py::arg("participant") = "participant",
      py::arg("stimulus") = "stimulus",
      "Crossed random-intercept mixed model fitted by REML from a trial "
      "CSV.");

  // -- themes -------------------------------------------------------------
  m.def(
      "extract_themes",
      [](const std::string& corpus_path, const std::string& stoplist_path,
         double min_doc_fraction, int k, double threshold) {
        const auto corpus = corpus::Corpus::load(corpus_path);
        std::set<std::string> stoplist;
        if (!stoplist_path.empty()) {
          stoplist = mem::load_stoplist(stoplist_path);
        }
        const auto dtm = mem::build_dtm(corpus, stoplist, min_doc_fraction);
        const auto sol = mem::extract_themes(dtm, k, threshold);
        py::dict out;
        out["k"] = sol.k;
        out["terms"] = sol.terms;
        out["doc_ids"] = sol.doc_ids;
        out["dropped_terms"] = sol.dropped_terms;
        py::list loadings, scores;
        for (Eigen::Index i = 0; i < sol.loadings.rows(); ++i) {
          py::list row;
          for (int j = 0; j < sol.k; ++j) row.append(sol.loadings(i, j));
          loadings.append(row);
        }
        for (Eigen::Index i = 0; i < sol.theme_scores.rows(); ++i) {
          py::list row;
          for (int j = 0; j < sol.k; ++j) row.append(sol.theme_scores(i, j));
          scores.append(row);
        }
        out["loadings"] = loadings;
        out["theme_scores"] = scores;
        out["explained_variance"] = sol.explained_variance;
        out["eigenvalues"] = sol.eigenvalues;
        out["report"] = mem::theme_report(sol);
        return out;
      },
      py::arg("corpus_path"), py::arg("stoplist") = std::string(),
      py::arg("min_doc_fraction") = 0.05, py::arg("k") = -1,
      py::arg("threshold") = 0.25,
      "Binary document-term matrix -> principal components -> varimax "
      "themes.");

  // -- study pipelines ----------------------------------------------------
  m.def(
      "run_yoked_comparison",
      [](const std::string& corpus_path, const std::string& lexicon,
         const std::string& common_words, const std::string& lay_kind,
         std::size_t replicates, std::uint64_t seed, int jobs) {
        const auto corpus = corpus::Corpus::load(corpus_path);
        const auto lex = lexicon::Lexicon::load(lexicon);
        const auto common = lexicon::CommonWordList::load(common_words);
        pipeline::YokedOptions options;
        options.lay_kind = kind_from(lay_kind);
        options.replicates = replicates;
        options.seed = seed;
        options.jobs = jobs;
        return report_to_dict(
            pipeline::run_yoked_comparison(corpus, lex, common, options));
      },
      py::arg("corpus_path"), py::arg("lexicon"), py::arg("common_words"),
      py::arg("lay_kind") = "human_lay",
      py::arg("replicates") = stats::kDefaultBootstrapReplicates,
      py::arg("seed"), py::arg("jobs") = 1,
      "Four simplicity comparisons (index, common words, analytic, "
      "readability) between yoked abstracts and lay texts.");

  m.def(
      "run_generation_comparison",
      [](const std::string& corpus_path, const std::string& lexicon,
         const std::string& common_words, const std::string& baseline,
         bool compare_abstracts, bool robustness, std::size_t replicates,
         std::uint64_t seed, int jobs, const std::string& stoplist_path,
         double min_doc_fraction, int themes_k) {
        const auto corpus = corpus::Corpus::load(corpus_path);
        const auto lex = lexicon::Lexicon::load(lexicon);
        const auto common = lexicon::CommonWordList::load(common_words);
        pipeline::GenerationOptions options;
        options.baseline_kind = kind_from(baseline);
        options.compare_abstracts = compare_abstracts;
        options.robustness = robustness;
        options.replicates = replicates;
        options.seed = seed;
        options.jobs = jobs;
        if (!stoplist_path.empty()) {
          options.stoplist = mem::load_stoplist(stoplist_path);
        }
        options.min_doc_fraction = min_doc_fraction;
        options.themes_k = themes_k;
        return report_to_dict(
            pipeline::run_generation_comparison(corpus, lex, common, options));
      },
      py::arg("corpus_path"), py::arg("lexicon"), py::arg("common_words"),
      py::arg("baseline") = "human_lay",
      py::arg("compare_abstracts") = false, py::arg("robustness") = true,
      py::arg("replicates") = stats::kDefaultBootstrapReplicates,
      py::arg("seed"), py::arg("jobs") = 1,
      py::arg("stoplist") = std::string(),
      py::arg("min_doc_fraction") = 0.05, py::arg("themes_k") = -1,
      "Compare AI-generated statements already in the corpus against a "
      "baseline kind, with covariate/theme robustness models.");

  m.def(
      "run_experiment_analysis",
      [](const std::string& csv_path, const std::string& condition,
         const std::string& participant, const std::string& stimulus) {
        const auto table = lmm::load_trial_table(csv_path);
        pipeline::ExperimentOptions options;
        options.condition_col = condition;
        options.participant_col = participant;
        options.stimulus_col = stimulus;
        return report_to_dict(
            pipeline::run_experiment_analysis(table, options));
      },
      py::arg("csv_path"), py::arg("condition") = "condition",
      py::arg("participant") = "participant",
      py::arg("stimulus") = "stimulus",
      "Per-outcome mixed models, the perception battery, and trial-level "
      "correlations for a trial CSV.");

  // -- generation protocol ------------------------------------------------
  m.def(
      "render_prompt",
      [](const std::string& abstract_text, int word_limit) {
        const corpus::Document doc{"doc", corpus::Kind::abstract,
                                   abstract_text};
        return genai::render_prompt(doc, word_limit);
      },
      py::arg("abstract_text"), py::arg("word_limit") = 120,
      "The chat prompt used to request a significance statement for an "
      "abstract.");
}
