#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "postag/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "postag/mock_backend.hpp"

namespace postag {

namespace {

struct ParsedUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must be an http(s) URL: " + url);
    std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

struct HttpBackend::Impl {
    ParsedUrl url;
    std::mutex mutex;  // httplib clients are not safe for concurrent use
    std::vector<std::unique_ptr<httplib::Client>> pool;

    std::unique_ptr<httplib::Client> make_client(const BackendConfig& config,
                                                 const std::string& bearer) {
        auto cli = std::make_unique<httplib::Client>(url.base);
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
        cli->set_connection_timeout(secs.count() ? secs : std::chrono::seconds(1));
        cli->set_read_timeout(secs.count() ? secs : std::chrono::seconds(1));
        cli->set_write_timeout(secs.count() ? secs : std::chrono::seconds(1));
        if (!bearer.empty()) cli->set_bearer_token_auth(bearer);
        return cli;
    }

    // One client per concurrent caller, recycled through a free list.
    std::unique_ptr<httplib::Client> take(const BackendConfig& config,
                                          const std::string& bearer) {
        std::lock_guard lock(mutex);
        if (!pool.empty()) {
            auto cli = std::move(pool.back());
            pool.pop_back();
            return cli;
        }
        return make_client(config, bearer);
    }
    void give_back(std::unique_ptr<httplib::Client> cli) {
        std::lock_guard lock(mutex);
        pool.push_back(std::move(cli));
    }
};

HttpBackend::HttpBackend(BackendConfig config)
    : config_(std::move(config)), slots_(config_.max_concurrency) {
    if (config_.max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
    if (!config_.api_key_env.empty()) {
        const char* token = std::getenv(config_.api_key_env.c_str());
        if (token) bearer_token_ = token;
    }
    impl_ = std::make_unique<Impl>();
    impl_->url = parse_url(config_.endpoint);
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::post_completion(const CompletionRequest& request, bool echo) {
    if (request.temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (request.max_tokens < 0) throw ConfigError("max_tokens must be >= 0");
    nlohmann::json body_json = {
        {"model", config_.model_name},       {"prompt", request.prompt},
        {"max_tokens", request.max_tokens},  {"temperature", request.temperature},
        {"echo", echo},
    };
    if (request.want_logprobs) body_json["logprobs"] = 1;
    if (!request.stop.empty()) body_json["stop"] = request.stop;
    const std::string body = body_json.dump();

    int attempts = config_.retry + 1;
    auto backoff = config_.backoff_initial;
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto cli = impl_->take(config_, bearer_token_);
        httplib::Result res = cli->Post(impl_->url.path, body, "application/json");
        impl_->give_back(std::move(cli));
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server returned " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("completion endpoint returned " +
                                 std::to_string(res->status) + ": " + res->body);
        return res->body;
    }
    throw TransportError("completion endpoint unreachable after " +
                         std::to_string(attempts) + " attempts: " + last_error);
}

double HttpBackend::label_logprob(const std::string& prompt, PosTag label) {
    // Teacher-forcing: echo the prompt plus " LABEL" with a zero budget
    // and read back the label pieces' logprobs.
    CompletionRequest request;
    request.prompt = prompt + " " + std::string(to_string(label));
    request.max_tokens = 0;
    request.want_logprobs = true;
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(post_completion(request, /*echo=*/true));
    } catch (const nlohmann::json::exception& e) {
        throw TransportError("malformed completion response: " + std::string(e.what()));
    }

    if (!reply.contains("choices") || reply["choices"].empty())
        throw TransportError("completion response has no choices");
    const nlohmann::json& choice = reply["choices"][0];
    if (!choice.contains("logprobs") || choice["logprobs"].is_null())
        throw CapabilityError(
            "backend does not return token logprobs; use generation mode "
            "(--mode gen) instead of probability scoring");
    const nlohmann::json& lp = choice["logprobs"];
    if (!lp.contains("token_logprobs") || !lp.contains("text_offset"))
        throw CapabilityError(
            "backend logprobs lack token_logprobs/text_offset; use generation mode");

    const auto& logprobs = lp["token_logprobs"];
    const auto& offsets = lp["text_offset"];
    if (logprobs.size() != offsets.size())
        throw TransportError("logprob and offset arrays disagree in length");

    // Sum the pieces belonging to the forced label, i.e. everything at or
    // past the prompt/label boundary.
    double sum = 0.0;
    std::size_t pieces = 0;
    for (std::size_t i = 0; i < logprobs.size(); ++i) {
        if (offsets[i].get<std::size_t>() < prompt.size()) continue;
        if (logprobs[i].is_null())
            throw CapabilityError("backend returned null logprob inside the label span");
        sum += logprobs[i].get<double>();
        ++pieces;
    }
    if (pieces == 0)
        throw TransportError("no scored tokens found past the prompt boundary");
    return config_.length_normalize_scores ? sum / static_cast<double>(pieces) : sum;
}

std::vector<CandidateScore> HttpBackend::score_candidates(
    const std::string& prompt, const std::vector<PosTag>& candidates) {
    check_candidates(candidates);
    SemaphoreGuard guard(slots_);
    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (PosTag c : candidates) scores.push_back({c, label_logprob(prompt, c)});
    return scores;
}

std::string HttpBackend::generate(const std::string& prompt, int max_tokens,
                                  const std::vector<std::string>& stop) {
    if (max_tokens < 1) throw Error("generate: max_tokens must be >= 1");
    SemaphoreGuard guard(slots_);
    CompletionRequest request;
    request.prompt = prompt;
    request.max_tokens = max_tokens;
    request.stop = stop;

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(post_completion(request, /*echo=*/false));
    } catch (const nlohmann::json::exception& e) {
        throw TransportError("malformed completion response: " + std::string(e.what()));
    }
    if (!reply.contains("choices") || reply["choices"].empty())
        throw TransportError("completion response has no choices");
    std::string text = reply["choices"][0].value("text", "");

    // Belt and braces: truncate client-side even if the server honored stop.
    std::size_t cut = std::string::npos;
    for (const std::string& s : stop) {
        if (s.empty()) continue;
        std::size_t pos = text.find(s);
        if (pos != std::string::npos) cut = std::min(cut, pos);
    }
    if (cut != std::string::npos) text.resize(cut);
    return text;
}

std::shared_ptr<CompletionBackend> make_backend(const BackendConfig& config) {
    switch (config.kind) {
        case BackendKind::Mock: {
            if (config.mock_fixture.empty())
                throw ConfigError("mock backend requires a fixture file (backend.mock_fixture)");
            return MockBackend::from_json_file(config.mock_fixture, config.max_concurrency);
        }
        case BackendKind::Http:
            return std::make_shared<HttpBackend>(config);
    }
    throw ConfigError("unknown backend kind");
}

}  // namespace postag
