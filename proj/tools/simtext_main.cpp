// Command-line surface for the simtext toolkit: scoring, group comparison,
// text generation, theme extraction, mixed models, power analysis, stimulus
// selection, and density summaries.
//
// Exit codes: 0 success, 1 analysis error, 2 usage or file error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simtext/corpus.hpp"
#include "simtext/csv.hpp"
#include "simtext/error.hpp"
#include "simtext/format.hpp"
#include "simtext/genai.hpp"
#include "simtext/lexicon.hpp"
#include "simtext/lmm.hpp"
#include "simtext/mem.hpp"
#include "simtext/pipeline.hpp"
#include "simtext/stats.hpp"
#include "simtext/textmetrics.hpp"

using namespace simtext;

namespace {

struct GlobalConfig {
  std::string lexicon;
  std::string common_words;
  std::string endpoint = "https://api.openai.com";
  std::string model = "gpt-4";
  std::string output_dir;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::size_t replicates = stats::kDefaultBootstrapReplicates;
};

GlobalConfig load_global_config(const std::string& path) {
  GlobalConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw IoError(path + ": config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "lexicon") cfg.lexicon = value.get<std::string>();
      else if (key == "common_words") cfg.common_words = value.get<std::string>();
      else if (key == "endpoint") cfg.endpoint = value.get<std::string>();
      else if (key == "model") cfg.model = value.get<std::string>();
      else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
      else if (key == "temperature") cfg.temperature = value.get<double>();
      else if (key == "replicates") cfg.replicates = value.get<std::size_t>();
      else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
        cfg.has_seed = true;
      } else {
        throw IoError(path + ": unknown config key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw IoError(path + ": config key \"" + key + "\" has the wrong type");
    }
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

// Relative output paths land inside the configured output directory.
std::string resolve_out(const GlobalConfig& cfg, const std::string& path) {
  if (path.empty() || cfg.output_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(cfg.output_dir) / p).string();
}

std::string require_lexicon_path(const GlobalConfig& cfg,
                                 const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!cfg.lexicon.empty()) return cfg.lexicon;
  throw IoError("a style lexicon is required (--lexicon or config \"lexicon\")");
}

std::string require_common_path(const GlobalConfig& cfg,
                                const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!cfg.common_words.empty()) return cfg.common_words;
  throw IoError(
      "a common-word list is required (--common or config \"common_words\")");
}

corpus::Kind parse_kind_arg(const std::string& s, const char* flag) {
  corpus::Kind kind;
  if (!corpus::parse_kind(s, kind)) {
    throw IoError(std::string(flag) + ": unknown document kind \"" + s +
                  "\" (expected abstract, human_lay, or ai_lay)");
  }
  return kind;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string in, out, format = "csv", lexicon, common;
  int jobs = 1;
  double mu0 = 0.0, sigma0 = 20.0;
};

int run_score(const GlobalConfig& cfg, const ScoreArgs& args) {
  if (args.format != "csv" && args.format != "jsonl") {
    throw IoError("--format must be csv or jsonl, got \"" + args.format + "\"");
  }
  const auto lex = lexicon::Lexicon::load(require_lexicon_path(cfg, args.lexicon));
  const auto common =
      lexicon::CommonWordList::load(require_common_path(cfg, args.common));
  const auto corpus = corpus::Corpus::load(args.in);
  auto cards = metrics::score_corpus(corpus, lex, common,
                                     {args.mu0, args.sigma0}, args.jobs);
  if (cards.size() >= 2) {
    try {
      metrics::simplicity_index(cards);
    } catch (const AnalysisError& e) {
      // Component variance can vanish in tiny corpora; the per-document
      // metrics are still worth writing, so the index column stays empty.
      std::cerr << "warning: " << e.what() << "\n";
    }
  }

  const auto path = resolve_out(cfg, args.out);
  if (args.format == "csv") {
    metrics::write_scorecards_csv(path, cards);
  } else {
    metrics::write_scorecards_jsonl(path, cards);
  }
  std::cout << "scored " << cards.size() << " documents -> " << path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::vector<std::string> summary;  // two "MEAN,SD,N" strings
  std::string measure = "common_words";
  std::string label_a = "group_a", label_b = "group_b";
  std::string study;
  std::string in, lexicon, common, out;
  std::string lay_kind = "human_lay", baseline = "human_lay", stoplist;
  bool compare_abstracts = false, no_robustness = false;
  double min_doc_fraction = 0.05;
  int themes_k = -1;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  bool has_replicates = false, has_seed = false;
  int jobs = 1;
  double mu0 = 0.0, sigma0 = 20.0;
};

stats::GroupSummary parse_summary(const std::string& text) {
  std::vector<double> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end != nullptr && (*end == ' ' || *end == '\t')) ++end;
    if (end == begin || *end != '\0') {
      throw IoError("--summary expects \"MEAN,SD,N\", got \"" + text + "\"");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3 || parts[2] < 2 ||
      parts[2] != static_cast<double>(static_cast<std::size_t>(parts[2]))) {
    throw IoError("--summary expects \"MEAN,SD,N\", got \"" + text + "\"");
  }
  return {static_cast<std::size_t>(parts[2]), parts[0], parts[1]};
}

std::string inject_config(const std::string& report_json,
                          const nlohmann::json& config) {
  auto j = nlohmann::json::parse(report_json);
  j["config"] = config;
  return j.dump(2) + "\n";
}

int run_compare(const GlobalConfig& cfg, const CompareArgs& args) {
  pipeline::StudyReport report;
  nlohmann::json resolved;

  if (!args.summary.empty()) {
    const auto study =
        args.study.empty() ? std::string("generation_comparison") : args.study;
    std::vector<pipeline::SummaryInput> measures;
    measures.push_back({args.measure, parse_summary(args.summary[0]),
                        parse_summary(args.summary[1])});
    report = pipeline::run_summary_comparison(study, args.label_a,
                                              args.label_b, measures);
    resolved["mode"] = "summary";
    resolved["study"] = study;
    resolved["measure"] = args.measure;
    resolved["summary_a"] = args.summary[0];
    resolved["summary_b"] = args.summary[1];
  } else {
    if (args.in.empty()) {
      throw IoError("compare needs either --summary or --in");
    }
    const std::size_t replicates =
        args.has_replicates ? args.replicates : cfg.replicates;
    if (!args.has_seed && !cfg.has_seed) {
      throw IoError("--seed is required for bootstrap resampling "
                    "(set it on the command line or in the config file)");
    }
    const std::uint64_t seed = args.has_seed ? args.seed : cfg.seed;
    const auto lexicon_path = require_lexicon_path(cfg, args.lexicon);
    const auto common_path = require_common_path(cfg, args.common);
    const auto lex = lexicon::Lexicon::load(lexicon_path);
    const auto common = lexicon::CommonWordList::load(common_path);
    const auto corpus = corpus::Corpus::load(args.in);
    const auto study =
        args.study.empty() ? std::string("yoked_comparison") : args.study;

    resolved["mode"] = "corpus";
    resolved["study"] = study;
    resolved["input"] = args.in;
    resolved["lexicon"] = lexicon_path;
    resolved["common_words"] = common_path;
    resolved["replicates"] = replicates;
    resolved["seed"] = seed;
    resolved["jobs"] = args.jobs;
    resolved["analytic_mu0"] = args.mu0;
    resolved["analytic_sigma0"] = args.sigma0;

    if (study == "yoked_comparison") {
      pipeline::YokedOptions options;
      options.lay_kind = parse_kind_arg(args.lay_kind, "--lay-kind");
      options.replicates = replicates;
      options.seed = seed;
      options.jobs = args.jobs;
      options.scaling = {args.mu0, args.sigma0};
      resolved["lay_kind"] = args.lay_kind;
      report = pipeline::run_yoked_comparison(corpus, lex, common, options);
    } else if (study == "generation_comparison") {
      pipeline::GenerationOptions options;
      options.baseline_kind = parse_kind_arg(args.baseline, "--baseline");
      options.compare_abstracts = args.compare_abstracts;
      options.robustness = !args.no_robustness;
      options.replicates = replicates;
      options.seed = seed;
      options.jobs = args.jobs;
      options.scaling = {args.mu0, args.sigma0};
      options.min_doc_fraction = args.min_doc_fraction;
      options.themes_k = args.themes_k;
      if (!args.stoplist.empty()) {
        options.stoplist = mem::load_stoplist(args.stoplist);
        resolved["stoplist"] = args.stoplist;
      }
      resolved["baseline"] = args.baseline;
      resolved["compare_abstracts"] = args.compare_abstracts;
      resolved["robustness"] = !args.no_robustness;
      report =
          pipeline::run_generation_comparison(corpus, lex, common, options);
    } else {
      throw IoError("--study must be yoked_comparison or "
                    "generation_comparison, got \"" + study + "\"");
    }
  }

  std::cout << pipeline::report_text(report);
  if (!args.out.empty()) {
    const auto path = resolve_out(cfg, args.out);
    write_file(path, inject_config(pipeline::report_json(report), resolved));
    std::cout << "report -> " << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string in, out, audit, endpoint, model;
  double temperature = -1.0;
  int word_limit = 120, max_retries = 2, jobs = 4, timeout = 120;
  bool has_temperature = false;
};

int run_generate(const GlobalConfig& cfg, const GenerateArgs& args) {
  const auto corpus = corpus::Corpus::load(args.in);
  genai::GenerationConfig gen;
  gen.model = args.model.empty() ? cfg.model : args.model;
  gen.temperature = args.has_temperature ? args.temperature : cfg.temperature;
  gen.word_limit = args.word_limit;
  gen.max_retries = args.max_retries;
  gen.parallelism = args.jobs;

  const auto endpoint = args.endpoint.empty() ? cfg.endpoint : args.endpoint;
  genai::HttpChatTransport transport(endpoint, genai::api_key_from_env(),
                                     "/v1/chat/completions", args.timeout);
  const auto out_path = resolve_out(cfg, args.out);
  const auto audit_path = resolve_out(
      cfg, args.audit.empty() ? args.out + ".audit.jsonl" : args.audit);
  const auto outcome =
      genai::batch_generate(corpus, transport, gen, audit_path);
  outcome.documents.save(out_path, corpus::Format::jsonl);

  std::cout << "accepted " << outcome.accepted << "/" << corpus.size()
            << " rejected " << outcome.rejected << " transport_errors "
            << outcome.transport_errors << " resumed " << outcome.resumed
            << " requests " << outcome.requests_issued << "\n"
            << "documents -> " << out_path << "\n"
            << "audit -> " << audit_path << "\n";
  if (outcome.accepted < corpus.size()) {
    std::cerr << "error: " << (corpus.size() - outcome.accepted) << " of "
              << corpus.size()
              << " documents were not generated; rerun to resume\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// themes

struct ThemesArgs {
  std::string in, stoplist, out_loadings, out_scores;
  double min_doc_fraction = 0.05, threshold = 0.25;
  int k = -1, top_terms = 8;
};

int run_themes(const GlobalConfig& cfg, const ThemesArgs& args) {
  const auto corpus = corpus::Corpus::load(args.in);
  std::set<std::string> stoplist;
  if (!args.stoplist.empty()) stoplist = mem::load_stoplist(args.stoplist);
  const auto dtm = mem::build_dtm(corpus, stoplist, args.min_doc_fraction);
  const auto sol = mem::extract_themes(dtm, args.k, args.threshold);
  if (!args.out_loadings.empty()) {
    mem::write_loadings_csv(resolve_out(cfg, args.out_loadings), sol);
  }
  if (!args.out_scores.empty()) {
    mem::write_theme_scores_csv(resolve_out(cfg, args.out_scores), sol);
  }
  std::cout << mem::theme_report(sol, args.top_terms);
  return 0;
}

// ---------------------------------------------------------------------------
// lmm

struct LmmArgs {
  std::string in, response, participant = "participant", stimulus = "stimulus";
  std::vector<std::string> fixed;
  std::string out;
  bool json = false, experiment = false;
};

int run_lmm(const GlobalConfig& cfg, const LmmArgs& args) {
  const auto table = lmm::load_trial_table(args.in);
  if (args.experiment) {
    pipeline::ExperimentOptions options;
    options.participant_col = args.participant;
    options.stimulus_col = args.stimulus;
    if (!args.fixed.empty()) options.condition_col = args.fixed.front();
    auto report = pipeline::run_experiment_analysis(table, options);
    std::cout << pipeline::report_text(report);
    if (!args.out.empty()) {
      nlohmann::json resolved;
      resolved["mode"] = "experiment";
      resolved["input"] = args.in;
      resolved["condition"] = options.condition_col;
      const auto path = resolve_out(cfg, args.out);
      write_file(path, inject_config(pipeline::report_json(report), resolved));
      std::cout << "report -> " << path << "\n";
    }
    return 0;
  }
  if (args.response.empty()) {
    throw IoError("--response is required (or use --experiment)");
  }
  const auto fixed =
      args.fixed.empty() ? std::vector<std::string>{"condition"} : args.fixed;
  const auto data = lmm::build_mixed_data(table, args.response, fixed,
                                          args.participant, args.stimulus);
  const auto fit = lmm::fit_lmm(data);
  const auto text = args.json ? lmm::fit_json(fit) : lmm::fit_table(fit);
  std::cout << text;
  if (!args.out.empty()) write_file(resolve_out(cfg, args.out), text);
  return 0;
}

// ---------------------------------------------------------------------------
// power

struct PowerArgs {
  std::string design;
  std::string convention = "multivariate";
  double d = 0.0, f = 0.0, alpha = 0.05, power = 0.80, rho = 0.5,
         epsilon = 1.0;
  int m = 3;
  long at = 0;
  bool has_at = false;
};

int run_power(const PowerArgs& args) {
  stats::PowerRequest req;
  if (args.design == "t") {
    req.design = stats::Design::two_sample_t;
    req.effect = args.d;
  } else if (args.design == "rm") {
    req.design = stats::Design::rm_anova_within;
    req.effect = args.f;
  } else {
    throw IoError("--design must be t or rm, got \"" + args.design + "\"");
  }
  req.alpha = args.alpha;
  req.power = args.power;
  req.measurements = args.m;
  req.rho = args.rho;
  req.epsilon = args.epsilon;
  if (args.convention == "multivariate") {
    req.convention = stats::RmConvention::multivariate;
  } else if (args.convention == "univariate") {
    req.convention = stats::RmConvention::univariate;
  } else {
    throw IoError("--convention must be multivariate or univariate, got \"" +
                  args.convention + "\"");
  }
  if (args.has_at) {
    std::cout << format_double(stats::power_at(req, args.at)) << "\n";
  } else {
    std::cout << stats::power_n(req) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string pairs, out;
  std::size_t k = 0;
};

int run_select(const GlobalConfig& cfg, const SelectArgs& args) {
  std::ifstream in(args.pairs, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + args.pairs);
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) {
    throw IoError(args.pairs + ": empty file");
  }
  std::size_t id_col = fields.size(), a_col = fields.size(),
              b_col = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == "id") id_col = i;
    else if (fields[i] == "score_a") a_col = i;
    else if (fields[i] == "score_b") b_col = i;
  }
  if (id_col == fields.size() || a_col == fields.size() ||
      b_col == fields.size()) {
    throw IoError(args.pairs + ": header must contain id, score_a, score_b");
  }
  std::vector<corpus::PairScore> pairs;
  std::size_t line = 1;
  const std::size_t width = fields.size();
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != width) {
      throw IoError(args.pairs + ":" + std::to_string(line) +
                    ": expected " + std::to_string(width) + " fields, got " +
                    std::to_string(fields.size()));
    }
    corpus::PairScore p;
    p.id = fields[id_col];
    for (auto [col, target] : {std::pair<std::size_t, double*>{a_col, &p.score_a},
                               {b_col, &p.score_b}}) {
      const char* begin = fields[col].c_str();
      char* end = nullptr;
      *target = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw IoError(args.pairs + ":" + std::to_string(line) +
                      ": non-numeric score \"" + fields[col] + "\"");
      }
    }
    pairs.push_back(std::move(p));
  }
  const auto chosen = corpus::select_stimuli(pairs, args.k);
  std::ostringstream out;
  out << "id,gap\n";
  for (const auto& c : chosen) {
    out << csv::quote(c.id) << "," << format_fixed(c.gap, 2) << "\n";
  }
  std::cout << out.str();
  if (!args.out.empty()) write_file(resolve_out(cfg, args.out), out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
  std::string in, column, group, out_csv, out_svg;
  int bins = 30;
};

int run_density(const GlobalConfig& cfg, const DensityArgs& args) {
  std::ifstream in(args.in, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + args.in);
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) throw IoError(args.in + ": empty file");
  std::size_t value_col = fields.size(), group_col = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == args.column) value_col = i;
    if (!args.group.empty() && fields[i] == args.group) group_col = i;
  }
  if (value_col == fields.size()) {
    throw IoError(args.in + ": no column named \"" + args.column + "\"");
  }
  if (!args.group.empty() && group_col == fields.size()) {
    throw IoError(args.in + ": no column named \"" + args.group + "\"");
  }

  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  std::size_t line = 1;
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (value_col >= fields.size() ||
        (!args.group.empty() && group_col >= fields.size())) {
      throw IoError(args.in + ":" + std::to_string(line) +
                    ": row has too few fields");
    }
    const char* begin = fields[value_col].c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw IoError(args.in + ":" + std::to_string(line) +
                    ": non-numeric value \"" + fields[value_col] +
                    "\" in column \"" + args.column + "\"");
    }
    const std::string label =
        args.group.empty() ? std::string("all") : fields[group_col];
    if (!values.count(label)) order.push_back(label);
    values[label].push_back(v);
  }
  if (order.empty()) throw IoError(args.in + ": no data rows");

  std::vector<std::pair<std::string, stats::DensitySummary>> groups;
  for (const auto& label : order) {
    groups.emplace_back(label,
                        stats::density_summary(values[label], args.bins));
  }

  if (!args.out_csv.empty()) {
    const auto base = resolve_out(cfg, args.out_csv);
    if (groups.size() == 1) {
      stats::write_density_csv(base, groups[0].second);
    } else {
      std::filesystem::path p(base);
      const auto stem = p.stem().string();
      const auto ext = p.extension().string();
      for (const auto& [label, summary] : groups) {
        auto path = p;
        path.replace_filename(stem + "_" + label + ext);
        stats::write_density_csv(path.string(), summary);
      }
    }
  }
  if (!args.out_svg.empty()) {
    write_file(resolve_out(cfg, args.out_svg), stats::density_svg(groups));
  }
  for (const auto& [label, summary] : groups) {
    std::cout << label << ": n=" << values[label].size()
              << " bandwidth=" << format_double(summary.bandwidth);
    if (summary.kde_skipped) std::cout << " (" << summary.warning << ")";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linguistic simplicity analysis for scientific text"};
  app.require_subcommand(1);
  std::string config_path;

  ScoreArgs score;
  auto* score_cmd =
      app.add_subcommand("score", "score documents on the simplicity measures");
  score_cmd->add_option("--config", config_path, "global config file (JSON)");
  score_cmd->add_option("--in", score.in, "corpus file (.jsonl or .csv)")
      ->required();
  score_cmd->add_option("--out", score.out, "output file")->required();
  score_cmd->add_option("--format", score.format, "csv or jsonl");
  score_cmd->add_option("--lexicon", score.lexicon, "style lexicon file");
  score_cmd->add_option("--common", score.common, "common-word list file");
  score_cmd->add_option("--jobs", score.jobs, "worker threads");
  score_cmd->add_option("--mu0", score.mu0, "analytic scaling center");
  score_cmd->add_option("--sigma0", score.sigma0, "analytic scaling spread");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "compare two document groups on the simplicity measures");
  compare_cmd->add_option("--config", config_path, "global config file (JSON)");
  compare_cmd
      ->add_option("--summary", compare.summary,
                   "two \"MEAN,SD,N\" group summaries")
      ->expected(2);
  compare_cmd->add_option("--measure", compare.measure,
                          "measure label for --summary mode");
  compare_cmd->add_option("--label-a", compare.label_a, "first group label");
  compare_cmd->add_option("--label-b", compare.label_b, "second group label");
  compare_cmd->add_option("--study", compare.study,
                          "yoked_comparison or generation_comparison");
  compare_cmd->add_option("--in", compare.in, "corpus file");
  compare_cmd->add_option("--lexicon", compare.lexicon, "style lexicon file");
  compare_cmd->add_option("--common", compare.common, "common-word list file");
  compare_cmd->add_option("--out", compare.out, "write the JSON report here");
  compare_cmd->add_option("--lay-kind", compare.lay_kind,
                          "lay kind for yoked comparisons");
  compare_cmd->add_option("--baseline", compare.baseline,
                          "baseline kind for generation comparisons");
  compare_cmd->add_flag("--compare-abstracts", compare.compare_abstracts,
                        "also compare generated texts against abstracts");
  compare_cmd->add_flag("--no-robustness", compare.no_robustness,
                        "skip the covariate/theme robustness models");
  compare_cmd->add_option("--stoplist", compare.stoplist,
                          "stopword file for theme extraction");
  compare_cmd->add_option("--min-doc-fraction", compare.min_doc_fraction,
                          "term document-frequency floor");
  compare_cmd->add_option("--themes-k", compare.themes_k,
                          "theme count (-1 = eigenvalue rule)");
  auto* rep_opt = compare_cmd->add_option("--replicates", compare.replicates,
                                          "bootstrap replicates");
  auto* seed_opt =
      compare_cmd->add_option("--seed", compare.seed, "bootstrap seed");
  compare_cmd->add_option("--jobs", compare.jobs, "worker threads");
  compare_cmd->add_option("--mu0", compare.mu0, "analytic scaling center");
  compare_cmd->add_option("--sigma0", compare.sigma0,
                          "analytic scaling spread");

  GenerateArgs generate;
  auto* generate_cmd = app.add_subcommand(
      "generate", "generate significance statements for abstracts");
  generate_cmd->add_option("--config", config_path,
                           "global config file (JSON)");
  generate_cmd->add_option("--in", generate.in, "abstract corpus file")
      ->required();
  generate_cmd->add_option("--out", generate.out, "output corpus file (JSONL)")
      ->required();
  generate_cmd->add_option("--audit", generate.audit,
                           "audit log path (default: <out>.audit.jsonl)");
  generate_cmd->add_option("--endpoint", generate.endpoint,
                           "chat-completion endpoint base URL");
  generate_cmd->add_option("--model", generate.model, "model name");
  auto* temp_opt = generate_cmd->add_option("--temperature",
                                            generate.temperature,
                                            "sampling temperature");
  generate_cmd->add_option("--word-limit", generate.word_limit,
                           "statement word limit");
  generate_cmd->add_option("--max-retries", generate.max_retries,
                           "rewrite attempts after an over-length statement");
  generate_cmd->add_option("--jobs", generate.jobs, "parallel requests");
  generate_cmd->add_option("--timeout", generate.timeout,
                           "per-request timeout in seconds");

  ThemesArgs themes;
  auto* themes_cmd =
      app.add_subcommand("themes", "extract themes from a corpus");
  themes_cmd->add_option("--config", config_path, "global config file (JSON)");
  themes_cmd->add_option("--in", themes.in, "corpus file")->required();
  themes_cmd->add_option("--stoplist", themes.stoplist, "stopword file");
  themes_cmd->add_option("--min-doc-fraction", themes.min_doc_fraction,
                         "term document-frequency floor");
  themes_cmd->add_option("--k", themes.k, "theme count (-1 = eigenvalue rule)");
  themes_cmd->add_option("--threshold", themes.threshold,
                         "absolute loading threshold");
  themes_cmd->add_option("--top-terms", themes.top_terms,
                         "terms listed per theme");
  themes_cmd->add_option("--out-loadings", themes.out_loadings,
                         "write loadings CSV here");
  themes_cmd->add_option("--out-scores", themes.out_scores,
                         "write theme-score CSV here");

  LmmArgs lmm_args;
  auto* lmm_cmd = app.add_subcommand(
      "lmm", "fit a crossed random-intercept mixed model");
  lmm_cmd->add_option("--config", config_path, "global config file (JSON)");
  lmm_cmd->add_option("--in", lmm_args.in, "trial table CSV")->required();
  lmm_cmd->add_option("--response", lmm_args.response, "response column");
  lmm_cmd->add_option("--fixed", lmm_args.fixed,
                      "fixed-effect columns (default: condition)");
  lmm_cmd->add_option("--participant", lmm_args.participant,
                      "participant column");
  lmm_cmd->add_option("--stimulus", lmm_args.stimulus, "stimulus column");
  lmm_cmd->add_flag("--json", lmm_args.json, "emit JSON instead of a table");
  lmm_cmd->add_flag("--experiment", lmm_args.experiment,
                    "run the full experiment analysis over every outcome");
  lmm_cmd->add_option("--out", lmm_args.out, "write the report here");

  PowerArgs power;
  auto* power_cmd =
      app.add_subcommand("power", "smallest sample size reaching a power");
  power_cmd->add_option("--config", config_path, "global config file (JSON)");
  power_cmd->add_option("--design", power.design, "t or rm")->required();
  power_cmd->add_option("--d", power.d, "Cohen's d (t designs)");
  power_cmd->add_option("--f", power.f, "Cohen's f (rm designs)");
  power_cmd->add_option("--alpha", power.alpha, "two-tailed alpha");
  power_cmd->add_option("--power", power.power, "target power");
  power_cmd->add_option("--m", power.m, "repeated measurements");
  power_cmd->add_option("--rho", power.rho, "measurement correlation");
  power_cmd->add_option("--epsilon", power.epsilon, "sphericity epsilon");
  power_cmd->add_option("--convention", power.convention,
                        "multivariate or univariate rm degrees of freedom");
  auto* at_opt = power_cmd->add_option(
      "--at", power.at, "report achieved power at this total sample size");

  SelectArgs select;
  auto* select_cmd = app.add_subcommand(
      "select", "pick the stimulus pairs with the largest score gaps");
  select_cmd->add_option("--config", config_path, "global config file (JSON)");
  select_cmd->add_option("--pairs", select.pairs,
                         "CSV with id, score_a, score_b columns")
      ->required();
  select_cmd->add_option("--k", select.k, "number of pairs to keep")
      ->required();
  select_cmd->add_option("--out", select.out, "also write the CSV here");

  DensityArgs density;
  auto* density_cmd = app.add_subcommand(
      "density", "histogram and kernel density of a score column");
  density_cmd->add_option("--config", config_path, "global config file (JSON)");
  density_cmd->add_option("--in", density.in, "CSV file of scores")
      ->required();
  density_cmd->add_option("--column", density.column, "numeric column name")
      ->required();
  density_cmd->add_option("--group", density.group,
                          "split into one curve per value of this column");
  density_cmd->add_option("--bins", density.bins, "histogram bins");
  density_cmd->add_option("--out-csv", density.out_csv,
                          "write histogram/KDE CSV here");
  density_cmd->add_option("--out-svg", density.out_svg,
                          "write an SVG overlay here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  compare.has_replicates = rep_opt->count() > 0;
  compare.has_seed = seed_opt->count() > 0;
  generate.has_temperature = temp_opt->count() > 0;
  power.has_at = at_opt->count() > 0;

  try {
    const GlobalConfig cfg = load_global_config(config_path);
    if (*score_cmd) return run_score(cfg, score);
    if (*compare_cmd) return run_compare(cfg, compare);
    if (*generate_cmd) return run_generate(cfg, generate);
    if (*themes_cmd) return run_themes(cfg, themes);
    if (*lmm_cmd) return run_lmm(cfg, lmm_args);
    if (*power_cmd) return run_power(power);
    if (*select_cmd) return run_select(cfg, select);
    if (*density_cmd) return run_density(cfg, density);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
