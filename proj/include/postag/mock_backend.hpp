#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "postag/backend.hpp"

namespace postag {

/// What the mock does for a token that has no row in the scoring table:
/// hand every candidate the same default logprob (argmax then falls to
/// the canonical-order tie-break) or fail loudly.
enum class UnknownTokenPolicy { Uniform, Error };

struct MockOptions {
    std::chrono::milliseconds latency{0};
    UnknownTokenPolicy unknown_token = UnknownTokenPolicy::Uniform;
    double default_logprob = -18.0;
    /// When no transcript matches, synthesize the generation from the
    /// scoring table (argmax tag, "<TAG>." for decomposed queries,
    /// "<TAG> " for iterative ones).
    bool derive_generation_from_table = true;
    int max_concurrency = 64;
};

struct MockCallRecord {
    enum class Kind { Score, Generate };
    Kind kind;
    std::string prompt;
    std::string result;  // generated text (empty for scoring calls)
    std::uint64_t seq_begin = 0;
    std::uint64_t seq_end = 0;
    std::chrono::steady_clock::time_point t_begin;
    std::chrono::steady_clock::time_point t_end;
    int in_flight_at_start = 0;
};

/// Deterministic scripted backend. Scoring looks the queried token up in
/// a table (the token is parsed from the prompt's final "of 'x'" span);
/// generation replays transcripts keyed by prompt suffix, longest match
/// first. Every call lands in a synchronized inspection log.
class MockBackend : public CompletionBackend {
public:
    using ScoreTable = std::map<std::string, std::map<PosTag, double>>;
    using Transcripts = std::map<std::string, std::string>;

    MockBackend(ScoreTable table, Transcripts transcripts, MockOptions options = {});

    std::vector<CandidateScore> score_candidates(
        const std::string& prompt, const std::vector<PosTag>& candidates) override;
    std::string generate(const std::string& prompt, int max_tokens,
                         const std::vector<std::string>& stop) override;
    int max_concurrency() const override { return options_.max_concurrency; }

    std::vector<MockCallRecord> call_log() const;
    int max_in_flight_observed() const;
    void reset_log();

    /// Parses the trailing query span of a decomposed prompt; exposed for
    /// tests. Returns nullopt when the prompt is not a decomposed query.
    static std::optional<std::string> query_token(const std::string& prompt);
    /// Parses the dangling "surface_" of an iterative prompt.
    static std::optional<std::string> iterative_token(const std::string& prompt);

    static std::shared_ptr<MockBackend> from_json_file(
        const std::string& path, std::optional<int> max_concurrency_override = {});

private:
    std::map<PosTag, double> row_for(const std::string& token) const;
    std::string derive_generation(const std::string& prompt) const;

    ScoreTable table_;
    std::vector<std::pair<std::string, std::string>> transcripts_;  // longest key first
    MockOptions options_;
    Semaphore slots_;

    mutable std::mutex log_mutex_;
    std::vector<MockCallRecord> log_;
    std::uint64_t seq_ = 0;
    int in_flight_ = 0;
    int max_in_flight_ = 0;
};

/// Test-oracle constructor mirroring the scripted-backend contract.
std::shared_ptr<MockBackend> mock_from_table(MockBackend::ScoreTable table,
                                             MockBackend::Transcripts transcripts = {},
                                             MockOptions options = {});

}  // namespace postag
