#ifndef GRADSEM_BACKEND_HPP
#define GRADSEM_BACKEND_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace gradsem {

struct ScoreRequest {
    std::string prompt;
    std::string continuation;
    // Optional context used by the mock backend for target lookup and
    // noise seeding; the HTTP backend ignores it.
    std::string stimulus_id;
};

// Anything that can assign a log-probability (nats) to a continuation
// conditioned on a prompt.
class ScoringBackend {
  public:
    virtual ~ScoringBackend() = default;
    virtual double score(const ScoreRequest& request) = 0;
    virtual std::string id() const = 0;
};

// Shaped, reproducible scores without a network: logprob(theta) =
// -(theta - target)^2 / (2 width^2) + noise, with noise drawn
// deterministically from (seed, stimulus id, theta) so results never
// depend on call order or concurrency.
struct MockParams {
    std::map<std::string, double> targets;  // stimulus id -> peak theta
    double default_target = 50.0;
    double width = 15.0;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 0;
};

class MockBackend : public ScoringBackend {
  public:
    explicit MockBackend(MockParams params) : params_(std::move(params)) {}
    double score(const ScoreRequest& request) override;
    std::string id() const override { return "mock"; }

    // The theta literal is recovered by parsing the candidate program.
    static double extract_theta(const std::string& continuation);

  private:
    MockParams params_;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{100};
};

struct BackendConfig {
    enum class Kind { HttpCompletions, Mock };
    Kind kind = Kind::Mock;
    std::string endpoint;    // full URL of the completions endpoint
    std::string model_name;
    std::string auth_env;    // env var holding the bearer credential; never logged
    int max_inflight = 1;
    RetryPolicy retry;
    MockParams mock_params;
    std::string fixture_dir;    // when set, successful HTTP scores are recorded here
    std::string run_log_path;   // when set, an append-only JSONL request log is kept
};

// Echo-scoring adapter for completions-style HTTP endpoints. Wire
// mapping: POST {"model", "prompt": prompt + continuation,
// "max_tokens": 0, "echo": true, "logprobs": 0, "temperature": 0}; the
// response's choices[0].logprobs must carry token_logprobs and
// text_offset arrays, and the score is the sum of token_logprobs for
// tokens whose text_offset falls at or beyond the prompt length.
// Transport failures and 429/5xx are retried with exponential backoff;
// missing token logprobs are a protocol error and are not retried.
class HttpBackend : public ScoringBackend {
  public:
    explicit HttpBackend(BackendConfig config);
    double score(const ScoreRequest& request) override;
    std::string id() const override { return "http:" + config_.model_name; }

  private:
    BackendConfig config_;
    std::string host_base_;  // scheme://host[:port]
    std::string path_;
    std::mutex log_mutex_;
};

// Fully offline replay from a fixture directory previously recorded by
// HttpBackend. Any cache miss is an error.
class FixtureBackend : public ScoringBackend {
  public:
    explicit FixtureBackend(std::string fixture_dir, std::string label = "fixture");
    double score(const ScoreRequest& request) override;
    std::string id() const override { return label_; }

  private:
    std::string dir_;
    std::string label_;
};

// Fixture file name for a (prompt, continuation) pair.
std::string fixture_file_name(const std::string& prompt, const std::string& continuation);

// Records one fixture file; used by HttpBackend and available to tests.
void write_fixture(const std::string& dir, const std::string& prompt,
                   const std::string& continuation, double logprob);

std::unique_ptr<ScoringBackend> make_backend(const BackendConfig& config);

}  // namespace gradsem

#endif  // GRADSEM_BACKEND_HPP
