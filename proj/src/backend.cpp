#include "gradsem/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "gradsem/church/sexpr.hpp"
#include "gradsem/errors.hpp"
#include "gradsem/hash.hpp"
#include "gradsem/rng.hpp"

namespace gradsem {

namespace fs = std::filesystem;
using nlohmann::json;

double MockBackend::extract_theta(const std::string& continuation) {
    church::SExpr form = [&] {
        try {
            return church::parse_single(continuation);
        } catch (const Error& e) {
            throw BackendError(std::string("mock backend cannot parse continuation: ") +
                               e.what());
        }
    }();
    // The theta literal is the last number in the candidate program.
    const church::SExpr* last_number = nullptr;
    auto walk = [&](const church::SExpr& e, auto&& self) -> void {
        if (e.is_number()) last_number = &e;
        if (e.is_quoted()) self(e.quoted_inner(), self);
        if (e.is_list())
            for (const church::SExpr& item : e.items()) self(item, self);
    };
    walk(form, walk);
    if (last_number == nullptr)
        throw BackendError("mock backend found no theta literal in: " + continuation);
    return last_number->as_number();
}

double MockBackend::score(const ScoreRequest& request) {
    const double theta = extract_theta(request.continuation);
    auto it = params_.targets.find(request.stimulus_id);
    const double target = it != params_.targets.end() ? it->second : params_.default_target;
    double logprob = -(theta - target) * (theta - target) / (2.0 * params_.width * params_.width);
    if (params_.noise_amplitude != 0.0) {
        const std::uint64_t salt =
            fnv1a64(request.stimulus_id + "|" + church::format_real(theta));
        RandomStream noise(derive_seed(params_.seed, salt));
        logprob += params_.noise_amplitude * noise.gaussian(0.0, 1.0);
    }
    return logprob;
}

std::string fixture_file_name(const std::string& prompt, const std::string& continuation) {
    return fnv1a64_hex(prompt) + "_" + fnv1a64_hex(continuation) + ".json";
}

void write_fixture(const std::string& dir, const std::string& prompt,
                   const std::string& continuation, double logprob) {
    fs::create_directories(dir);
    json doc;
    doc["prompt_hash"] = fnv1a64_hex(prompt);
    doc["continuation"] = continuation;
    doc["logprob"] = logprob;
    const fs::path path = fs::path(dir) / fixture_file_name(prompt, continuation);
    std::ofstream out(path);
    if (!out) throw BackendError("cannot write fixture: " + path.string());
    out << doc.dump(2) << '\n';
}

FixtureBackend::FixtureBackend(std::string fixture_dir, std::string label)
    : dir_(std::move(fixture_dir)), label_(std::move(label)) {}

double FixtureBackend::score(const ScoreRequest& request) {
    const fs::path path =
        fs::path(dir_) / fixture_file_name(request.prompt, request.continuation);
    std::ifstream in(path);
    if (!in)
        throw BackendError("fixture miss: no recording for prompt " +
                           fnv1a64_hex(request.prompt) + " continuation '" +
                           request.continuation + "' under " + dir_);
    json doc;
    try {
        in >> doc;
        return doc.at("logprob").get<double>();
    } catch (const json::exception& e) {
        throw BackendError("corrupt fixture " + path.string() + ": " + e.what());
    }
}

namespace {

// Splits "http://host:port/path" into client base and path.
void split_endpoint(const std::string& endpoint, std::string& base, std::string& path) {
    const std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw ValidationError("backend endpoint must be a full URL: " + endpoint);
    const std::size_t slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) {
        base = endpoint;
        path = "/";
    } else {
        base = endpoint.substr(0, slash);
        path = endpoint.substr(slash);
    }
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    split_endpoint(config_.endpoint, host_base_, path_);
    if (config_.retry.max_attempts < 1)
        throw ValidationError("backend retry.max_attempts must be >= 1");
}

double HttpBackend::score(const ScoreRequest& request) {
    json body;
    body["model"] = config_.model_name;
    body["prompt"] = request.prompt + request.continuation;
    body["max_tokens"] = 0;
    body["echo"] = true;
    body["logprobs"] = 0;
    body["temperature"] = 0;
    const std::string payload = body.dump();

    std::string bearer;
    if (!config_.auth_env.empty()) {
        if (const char* value = std::getenv(config_.auth_env.c_str())) bearer = value;
    }

    std::string attempt_log;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        const auto started = std::chrono::steady_clock::now();
        httplib::Client client(host_base_);
        client.set_read_timeout(60, 0);
        httplib::Headers headers;
        if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);
        auto res = client.Post(path_, headers, payload, "application/json");
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();

        if (!res) {
            attempt_log += "attempt " + std::to_string(attempt) + ": transport error (" +
                           httplib::to_string(res.error()) + "); ";
        } else if (res->status == 429 || res->status >= 500) {
            attempt_log += "attempt " + std::to_string(attempt) + ": HTTP " +
                           std::to_string(res->status) + "; ";
        } else if (res->status != 200) {
            throw BackendError("backend rejected request with HTTP " +
                               std::to_string(res->status) + ": " + res->body);
        } else {
            double total = 0.0;
            try {
                const json doc = json::parse(res->body);
                const json& lp = doc.at("choices").at(0).at("logprobs");
                const json& token_logprobs = lp.at("token_logprobs");
                const json& text_offset = lp.at("text_offset");
                if (token_logprobs.size() != text_offset.size())
                    throw BackendError("backend protocol error: offset/logprob length mismatch");
                const auto prompt_len = static_cast<long long>(request.prompt.size());
                for (std::size_t i = 0; i < token_logprobs.size(); ++i) {
                    if (text_offset[i].get<long long>() < prompt_len) continue;
                    if (token_logprobs[i].is_null())
                        throw BackendError(
                            "backend protocol error: missing token logprob inside continuation");
                    total += token_logprobs[i].get<double>();
                }
            } catch (const json::exception& e) {
                throw BackendError(std::string("backend protocol error: ") + e.what() +
                                   " in response: " + res->body.substr(0, 512));
            }
            if (!config_.fixture_dir.empty())
                write_fixture(config_.fixture_dir, request.prompt, request.continuation, total);
            if (!config_.run_log_path.empty()) {
                json line;
                line["request_hash"] = fnv1a64_hex(payload);
                line["prompt_hash"] = fnv1a64_hex(request.prompt);
                line["continuation"] = request.continuation;
                line["logprob"] = total;
                line["latency_ms"] = elapsed;
                line["attempt"] = attempt;
                std::lock_guard<std::mutex> lock(log_mutex_);
                std::ofstream log(config_.run_log_path, std::ios::app);
                log << line.dump() << '\n';
            }
            return total;
        }

        if (attempt < config_.retry.max_attempts) {
            const auto backoff = config_.retry.base_backoff * (1LL << (attempt - 1));
            std::this_thread::sleep_for(backoff);
        }
    }
    throw BackendError("backend unreachable after " +
                       std::to_string(config_.retry.max_attempts) + " attempt(s): " +
                       attempt_log);
}

std::unique_ptr<ScoringBackend> make_backend(const BackendConfig& config) {
    if (config.max_inflight < 1) throw ValidationError("backend max_inflight must be >= 1");
    switch (config.kind) {
        case BackendConfig::Kind::Mock:
            return std::make_unique<MockBackend>(config.mock_params);
        case BackendConfig::Kind::HttpCompletions:
            return std::make_unique<HttpBackend>(config);
    }
    throw ValidationError("unknown backend kind");
}

}  // namespace gradsem
