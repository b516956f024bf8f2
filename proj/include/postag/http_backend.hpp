#pragma once

#include <memory>
#include <string>
#include <vector>

#include "postag/backend.hpp"

namespace postag {

/// Client for a completions-style HTTP endpoint. Requests are UTF-8 JSON
/// bodies with fields model, prompt, max_tokens, temperature, logprobs,
/// echo, stop; responses carry generated text plus per-token logprobs
/// with character offsets. Candidate scoring teacher-forces the label
/// (leading space + label text) with echo=true and max_tokens=0, then
/// sums the log-probabilities of the pieces that lie past the prompt
/// boundary.
class HttpBackend : public CompletionBackend {
public:
    explicit HttpBackend(BackendConfig config);
    ~HttpBackend() override;

    std::vector<CandidateScore> score_candidates(
        const std::string& prompt, const std::vector<PosTag>& candidates) override;
    std::string generate(const std::string& prompt, int max_tokens,
                         const std::vector<std::string>& stop) override;
    int max_concurrency() const override { return config_.max_concurrency; }

private:
    struct Impl;

    std::string post_completion(const CompletionRequest& request, bool echo);
    double label_logprob(const std::string& prompt, PosTag label);

    BackendConfig config_;
    std::string bearer_token_;
    std::unique_ptr<Impl> impl_;
    Semaphore slots_;
};

}  // namespace postag
