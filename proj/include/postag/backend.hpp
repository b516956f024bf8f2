#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "postag/errors.hpp"
#include "postag/tagset.hpp"

namespace postag {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 1;  // 0 is legal for echo-scoring requests
    double temperature = 0.0;
    std::vector<std::string> stop;
    bool want_logprobs = false;
};

struct CandidateScore {
    PosTag label;
    double logprob;  // natural log, summed over the label's token pieces
};

enum class BackendKind { Mock, Http };

struct BackendConfig {
    BackendKind kind = BackendKind::Mock;
    std::string endpoint;    // http(s)://host[:port]/path
    std::string model_name;
    int max_concurrency = 8;
    std::chrono::milliseconds timeout{30000};
    int retry = 3;
    std::chrono::milliseconds backoff_initial{100};
    std::string api_key_env;  // env var holding the bearer token
    /// Optional mean-per-piece scoring instead of the default raw sum.
    bool length_normalize_scores = false;
    std::string mock_fixture;  // JSON table/transcript file for the mock

    bool operator==(const BackendConfig&) const = default;
};

/// Counting semaphore on mutex+cv; the standard one fixes its ceiling at
/// compile time.
class Semaphore {
public:
    explicit Semaphore(int count) : count_(count) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return count_ > 0; });
        --count_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            ++count_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
};

class SemaphoreGuard {
public:
    explicit SemaphoreGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
    ~SemaphoreGuard() { sem_.release(); }
    SemaphoreGuard(const SemaphoreGuard&) = delete;
    SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

private:
    Semaphore& sem_;
};

/// The model interface: candidate-label scoring and free generation.
/// Implementations accept concurrent calls up to max_concurrency.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    /// One score per candidate, in candidate order. Scores are the
    /// log-probability of the label text (leading space + label)
    /// continuing the prompt.
    virtual std::vector<CandidateScore> score_candidates(
        const std::string& prompt, const std::vector<PosTag>& candidates) = 0;

    /// Greedy continuation, truncated at any stop sequence.
    virtual std::string generate(const std::string& prompt, int max_tokens,
                                 const std::vector<std::string>& stop) = 0;

    virtual bool supports_scoring() const { return true; }
    virtual int max_concurrency() const = 0;
};

std::shared_ptr<CompletionBackend> make_backend(const BackendConfig& config);

/// Candidate lists must be non-empty and duplicate-free.
inline void check_candidates(const std::vector<PosTag>& candidates) {
    if (candidates.empty()) throw Error("score_candidates: empty candidate list");
    bool seen[kTagCount] = {};
    for (PosTag t : candidates) {
        if (seen[tag_index(t)])
            throw Error("score_candidates: duplicate candidate " +
                        std::string(to_string(t)));
        seen[tag_index(t)] = true;
    }
}

}  // namespace postag
