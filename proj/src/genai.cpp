#include "simtext/genai.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "simtext/error.hpp"
#include "simtext/hash.hpp"
#include "simtext/textmetrics.hpp"

namespace simtext::genai {

namespace {

const char* const kPromptIntro =
    "The following text is an academic abstract from the journal Proceedings "
    "of the National Academy of Sciences.";

const char* const kPromptTaskPrefix =
    "Based on this abstract, create a significance statement. This statement "
    "should provide enough context for the paper's implications to be clear "
    "to readers. The statement should not contain references and should "
    "avoid numbers, measurements, and acronyms unless necessary. It should "
    "explain the significance of the research at a level understandable to "
    "an undergraduate-educated scientist outside their field of specialty. "
    "Finally, it should include no more than ";

const char* const kPromptTaskSuffix =
    " words. Write the significance statement here:";

int count_words(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
  if (blank) return 0;
  return static_cast<int>(metrics::tokenize(text).word_count());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

struct ParsedReply {
  bool ok = false;
  std::string content;
  std::string id;
  std::string error;
};

ParsedReply parse_reply(const std::string& body) {
  ParsedReply out;
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    out.error = "response is not valid JSON";
    return out;
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    out.error = "response has no choices";
    return out;
  }
  const auto& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    out.error = "response choice has no message content";
    return out;
  }
  out.content = first["message"]["content"].get<std::string>();
  if (j.contains("id") && j["id"].is_string()) {
    out.id = j["id"].get<std::string>();
  }
  out.ok = true;
  return out;
}

void backoff_sleep(const BackoffPolicy& policy, int completed_tries) {
  const double ms = static_cast<double>(policy.base.count()) *
                    std::pow(policy.factor, completed_tries - 1);
  const auto wait = std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(ms)));
  if (policy.sleep_fn) {
    policy.sleep_fn(wait);
  } else {
    std::this_thread::sleep_for(wait);
  }
}

}  // namespace

const char* status_name(Status status) {
  switch (status) {
    case Status::accepted:
      return "accepted";
    case Status::rejected:
      return "rejected";
    case Status::transport_error:
      return "transport_error";
  }
  return "unknown";
}

std::string render_prompt(const corpus::Document& abstract) {
  return render_prompt(abstract, 120);
}

std::string render_prompt(const corpus::Document& abstract, int word_limit) {
  if (abstract.kind != corpus::Kind::abstract) {
    throw AnalysisError("prompt requires an abstract, got " +
                        std::string(corpus::kind_name(abstract.kind)) +
                        " (id " + abstract.id + ")");
  }
  const bool blank = std::all_of(
      abstract.text.begin(), abstract.text.end(),
      [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) {
    throw AnalysisError("abstract " + abstract.id + " has no text");
  }
  if (word_limit <= 0) throw AnalysisError("word limit must be positive");
  std::string out = kPromptIntro;
  out += "\n\n";
  out += abstract.text;
  out += "\n\n";
  out += kPromptTaskPrefix;
  out += std::to_string(word_limit);
  out += kPromptTaskSuffix;
  return out;
}

std::string request_body(const GenerationJob& job, int attempt) {
  std::string prompt = job.prompt;
  if (attempt > 1) {
    prompt += "\n\nYour previous statement was too long. Rewrite the "
              "significance statement so it includes no more than " +
              std::to_string(job.word_limit) + " words.";
  }
  nlohmann::json body;
  body["model"] = job.model;
  body["temperature"] = job.temperature;
  body["messages"] = nlohmann::json::array(
      {nlohmann::json{{"role", "user"}, {"content", prompt}}});
  return body.dump();
}

GenerationJob make_job(const corpus::Document& abstract,
                       const GenerationConfig& config) {
  if (config.max_retries < 0) {
    throw AnalysisError("max_retries must be non-negative");
  }
  if (config.temperature < 0.0) {
    throw AnalysisError("temperature must be non-negative");
  }
  GenerationJob job;
  job.abstract_id = abstract.id;
  job.prompt = render_prompt(abstract, config.word_limit);
  job.model = config.model;
  job.temperature = config.temperature;
  job.max_retries = config.max_retries;
  job.word_limit = config.word_limit;
  return job;
}

std::string api_key_from_env() {
  for (const char* name : {"SIMTEXT_API_KEY", "OPENAI_API_KEY"}) {
    const char* value = std::getenv(name);
    if (value != nullptr && value[0] != '\0') return value;
  }
  throw IoError("API key not set: define SIMTEXT_API_KEY or OPENAI_API_KEY");
}

AuditLog::AuditLog(const std::string& path) : path_(path) {
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw IoError(path + ": cannot open audit log for append");
}

void AuditLog::append(const AuditRecord& record) {
  nlohmann::json j;
  j["id"] = record.id;
  j["attempt"] = record.attempt;
  j["request_hash"] = record.request_hash;
  j["response_text"] = record.response_text;
  j["word_count"] = record.word_count;
  j["status"] = record.status;
  j["timestamp"] = record.timestamp;
  const std::string line = j.dump();
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << line << "\n";
  out_.flush();
  if (!out_) throw IoError(path_ + ": audit log write failed");
}

std::map<std::string, AuditRecord> AuditLog::accepted_records(
    const std::string& path) {
  std::map<std::string, AuditRecord> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open audit log");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": malformed audit record");
    }
    AuditRecord rec;
    try {
      rec.id = j.at("id").get<std::string>();
      rec.attempt = j.at("attempt").get<int>();
      rec.request_hash = j.value("request_hash", std::string());
      rec.response_text = j.at("response_text").get<std::string>();
      rec.word_count = j.at("word_count").get<int>();
      rec.status = j.at("status").get<std::string>();
      rec.timestamp = j.value("timestamp", std::string());
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": audit record missing field: " + e.what());
    }
    if (rec.status == "accepted" && rec.word_count >= 1 &&
        !rec.response_text.empty()) {
      out[rec.id] = rec;
    }
  }
  return out;
}

GenerationResult generate(const GenerationJob& job, ChatTransport& transport,
                          const BackoffPolicy& backoff, AuditLog* audit) {
  if (backoff.max_attempts < 1) {
    throw AnalysisError("backoff needs at least one attempt");
  }
  GenerationResult result;
  result.abstract_id = job.abstract_id;
  result.model_name = job.model;

  const int attempts_allowed = job.max_retries + 1;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    const std::string body = request_body(job, attempt);
    const std::string hash = hex64(fnv1a64(body));
    result.attempts = attempt;

    TransportReply reply;
    bool settled = false;
    std::string transport_error;
    for (int send_try = 1; send_try <= backoff.max_attempts; ++send_try) {
      ++result.requests;
      try {
        reply = transport.send(body);
      } catch (const std::exception& e) {
        reply = TransportReply{0, "", e.what()};
      }
      const bool retryable =
          reply.status == 0 || reply.status == 429 || reply.status >= 500;
      if (!retryable) {
        settled = true;
        break;
      }
      transport_error = reply.status == 0
                            ? (reply.error.empty() ? "connection failed"
                                                   : reply.error)
                            : "HTTP " + std::to_string(reply.status);
      if (send_try < backoff.max_attempts) backoff_sleep(backoff, send_try);
    }

    auto log = [&](const std::string& status, const std::string& text,
                   int word_count) {
      if (audit == nullptr) return;
      audit->append(AuditRecord{job.abstract_id, attempt, hash, text,
                                word_count, status, utc_timestamp()});
    };

    if (!settled) {
      result.status = Status::transport_error;
      result.error = transport_error + " after " +
                     std::to_string(backoff.max_attempts) + " attempts";
      log("transport_error", "", 0);
      return result;
    }
    if (reply.status != 200) {
      result.status = Status::transport_error;
      result.error = "HTTP " + std::to_string(reply.status);
      log("transport_error", "", 0);
      return result;
    }
    const ParsedReply parsed = parse_reply(reply.body);
    if (!parsed.ok) {
      result.status = Status::transport_error;
      result.error = parsed.error;
      log("transport_error", "", 0);
      return result;
    }

    const int words = count_words(parsed.content);
    result.text = parsed.content;
    result.word_count = words;
    result.request_id = parsed.id;
    if (words >= 1 && words <= job.word_limit) {
      result.status = Status::accepted;
      result.error.clear();
      log("accepted", parsed.content, words);
      return result;
    }
    // over the limit (or empty): log the attempt and ask for a rewrite
    log("rejected", parsed.content, words);
    result.status = Status::rejected;
    result.error = words == 0
                       ? "statement is empty"
                       : "statement has " + std::to_string(words) +
                             " words, limit " + std::to_string(job.word_limit);
  }
  return result;  // rewrites exhausted; final text kept, never truncated
}

BatchOutcome batch_generate(const corpus::Corpus& abstracts,
                            ChatTransport& transport,
                            const GenerationConfig& config,
                            const std::string& audit_path) {
  for (const auto& doc : abstracts.documents()) {
    if (doc.kind != corpus::Kind::abstract) {
      throw AnalysisError("batch input must contain only abstracts; id " +
                          doc.id + " has kind " +
                          std::string(corpus::kind_name(doc.kind)));
    }
  }
  const auto resume = AuditLog::accepted_records(audit_path);
  AuditLog audit(audit_path);

  std::vector<const corpus::Document*> docs;
  docs.reserve(abstracts.size());
  for (const auto& doc : abstracts.documents()) docs.push_back(&doc);
  std::sort(docs.begin(), docs.end(),
            [](const corpus::Document* a, const corpus::Document* b) {
              return a->id < b->id;
            });

  BatchOutcome outcome;
  outcome.results.resize(docs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto it = resume.find(docs[i]->id);
    if (it != resume.end()) {
      GenerationResult& r = outcome.results[i];
      r.abstract_id = docs[i]->id;
      r.text = it->second.response_text;
      r.word_count = it->second.word_count;
      r.attempts = it->second.attempt;
      r.requests = 0;
      r.status = Status::accepted;
      r.model_name = config.model;
      ++outcome.resumed;
    } else {
      pending.push_back(i);
    }
  }

  const int workers = std::max(
      1, std::min(config.parallelism, static_cast<int>(pending.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&]() {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const std::size_t i = pending[slot];
      try {
        outcome.results[i] = generate(make_job(*docs[i], config), transport,
                                      config.backoff, &audit);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(run);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < docs.size(); ++i) {
    const GenerationResult& r = outcome.results[i];
    outcome.requests_issued += r.requests;
    switch (r.status) {
      case Status::accepted:
        ++outcome.accepted;
        outcome.documents.add(corpus::Document{r.abstract_id,
                                               corpus::Kind::ai_lay, r.text});
        break;
      case Status::rejected:
        ++outcome.rejected;
        break;
      case Status::transport_error:
        ++outcome.transport_errors;
        break;
    }
  }
  return outcome;
}

// HTTP transport over cpp-httplib.
struct HttpChatTransport::Impl {
  httplib::Client client;
  std::string path;
  std::string api_key;

  Impl(const std::string& base_url, std::string key, std::string endpoint,
       int timeout_seconds)
      : client(base_url), path(std::move(endpoint)), api_key(std::move(key)) {
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
  }
};

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key,
                                     std::string path, int timeout_seconds)
    : impl_(std::make_unique<Impl>(base_url, std::move(api_key),
                                   std::move(path), timeout_seconds)) {}

HttpChatTransport::~HttpChatTransport() = default;

TransportReply HttpChatTransport::send(const std::string& request_body) {
  httplib::Headers headers;
  if (!impl_->api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->api_key);
  }
  auto res = impl_->client.Post(impl_->path, headers, request_body,
                                "application/json");
  if (!res) {
    return TransportReply{0, "", httplib::to_string(res.error())};
  }
  return TransportReply{res->status, res->body, ""};
}

}  // namespace simtext::genai
