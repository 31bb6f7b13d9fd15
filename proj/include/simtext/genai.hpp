#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "simtext/corpus.hpp"

// Chat-completion client that turns abstracts into AI-written significance
// statements, enforcing the word limit and logging every attempt.

namespace simtext::genai {

// Raw reply from one HTTP exchange.  status == 0 means the request never
// completed (connection failure); error then carries the reason.
struct TransportReply {
  int status = 0;
  std::string body;
  std::string error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportReply send(const std::string& request_body) = 0;
};

// POSTs to an OpenAI-compatible chat-completion endpoint.
class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(std::string base_url, std::string api_key,
                    std::string path = "/v1/chat/completions",
                    int timeout_seconds = 120);
  ~HttpChatTransport() override;
  TransportReply send(const std::string& request_body) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Reads SIMTEXT_API_KEY, falling back to OPENAI_API_KEY.
std::string api_key_from_env();

struct BackoffPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base{500};
  double factor = 2.0;
  // Injectable for tests; nullptr sleeps for real.
  std::function<void(std::chrono::milliseconds)> sleep_fn;
};

struct GenerationConfig {
  std::string model = "gpt-4";
  double temperature = 1.0;
  int word_limit = 120;
  int max_retries = 2;  // rewrite attempts after an over-long statement
  int parallelism = 4;
  BackoffPolicy backoff;
};

enum class Status { accepted, rejected, transport_error };
const char* status_name(Status status);

struct GenerationJob {
  std::string abstract_id;
  std::string prompt;
  std::string model;
  double temperature = 1.0;
  int max_retries = 2;
  int word_limit = 120;
};

struct GenerationResult {
  std::string abstract_id;
  std::string text;        // final attempt text (never truncated)
  int word_count = 0;
  int attempts = 0;        // completion attempts (not transport retries)
  int requests = 0;        // HTTP requests actually sent
  Status status = Status::transport_error;
  std::string model_name;
  std::string request_id;  // API-provided id of the final response
  std::string error;
};

// The instruction template with the abstract inserted between the context
// sentence and the task description.  The overload substitutes a custom word
// limit into the instruction text; the default is 120.
std::string render_prompt(const corpus::Document& abstract);
std::string render_prompt(const corpus::Document& abstract, int word_limit);

// JSON body for the chat request; attempt > 1 appends the corrective
// instruction asking for a rewrite within the limit.
std::string request_body(const GenerationJob& job, int attempt);

GenerationJob make_job(const corpus::Document& abstract,
                       const GenerationConfig& config);

// One line per attempt in the append-only audit file.
struct AuditRecord {
  std::string id;
  int attempt = 0;
  std::string request_hash;
  std::string response_text;
  int word_count = 0;
  std::string status;
  std::string timestamp;
};

class AuditLog {
 public:
  explicit AuditLog(const std::string& path);
  void append(const AuditRecord& record);

  // Latest accepted record per id, for resuming a batch.
  static std::map<std::string, AuditRecord> accepted_records(
      const std::string& path);

 private:
  std::string path_;
  std::ofstream out_;
  std::mutex mutex_;
};

GenerationResult generate(const GenerationJob& job, ChatTransport& transport,
                          const BackoffPolicy& backoff,
                          AuditLog* audit = nullptr);

struct BatchOutcome {
  corpus::Corpus documents;                // accepted statements, kind ai_lay
  std::vector<GenerationResult> results;   // every input id, sorted by id
  int requests_issued = 0;                 // HTTP requests sent by this run
  int accepted = 0;
  int rejected = 0;
  int transport_errors = 0;
  int resumed = 0;                         // ids reused from the audit file
};

// Generates one statement per abstract, skipping ids already accepted in the
// audit file; continues past per-item failures.
BatchOutcome batch_generate(const corpus::Corpus& abstracts,
                            ChatTransport& transport,
                            const GenerationConfig& config,
                            const std::string& audit_path);

}  // namespace simtext::genai
