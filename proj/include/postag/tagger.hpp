#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postag/backend.hpp"
#include "postag/corpus.hpp"
#include "postag/prompt.hpp"

namespace postag {

enum class TagMode { DecomProb, DecomGen, Iter };

std::string_view to_string(TagMode mode);
std::optional<TagMode> parse_tag_mode(std::string_view text);

struct Prediction {
    Sentence sentence;
    std::vector<PosTag> predicted_tags;                            // length n
    std::optional<std::vector<std::vector<CandidateScore>>> per_token_scores;
    TagMode mode = TagMode::DecomProb;
    std::chrono::duration<double, std::milli> wall_time{0};
    std::size_t request_count = 0;       // one model call per token
    std::size_t extraction_failures = 0; // gen-mode parses that fell back to X
};

struct TaggerOptions {
    int gen_max_tokens = 8;
    std::vector<std::string> gen_stop = {"\n"};
    bool keep_scores = false;
    /// Evaluate decomposed prompts in this order (indices into the
    /// sentence) on a single thread instead of dispatching concurrently.
    /// Exists so order-invariance is directly testable.
    std::optional<std::vector<std::size_t>> sequential_order;
};

/// Decomposed probability mode: per token, argmax over all 17 candidate
/// labels of the continuation logprob; ties break in canonical tag
/// order. Per-token requests dispatch concurrently up to the backend's
/// max_concurrency; results are order-invariant.
Prediction tag_decomposed_prob(const Sentence& x, const std::string& demonstration_prefix,
                               CompletionBackend& backend, const TaggerOptions& opts = {},
                               const PromptTemplate& tmpl = {});

/// Decomposed generation mode: per token, greedy continuation with a
/// small budget and newline stop, then tag extraction; extraction
/// failures fall back to X and are counted.
Prediction tag_decomposed_gen(const Sentence& x, const std::string& demonstration_prefix,
                              CompletionBackend& backend, const TaggerOptions& opts = {},
                              const PromptTemplate& tmpl = {});

/// Iterative baseline: strictly sequential left-to-right decoding; each
/// predicted label is appended (canonicalized) to the context before the
/// next token is decoded.
Prediction tag_iterative(const Sentence& x, std::span<const Sentence> demos,
                         const std::optional<std::string>& instruction,
                         CompletionBackend& backend, const TaggerOptions& opts = {});

/// First maximal alphabetic run that case-sensitively equals a tag name;
/// none when no run matches.
std::optional<PosTag> extract_tag(std::string_view generated);

/// Prediction dump records (line-delimited JSON). Timing lives in a
/// separate sidecar stream so dumps are byte-stable across reruns.
void write_predictions_jsonl(std::ostream& out, std::span<const Prediction> predictions);
void write_timings_jsonl(std::ostream& out, std::span<const Prediction> predictions);

struct DumpRecord {
    std::string mode;
    std::string language;
    std::string source_id;
    std::vector<std::string> tokens;
    std::vector<std::string> gold;
    std::vector<std::string> predicted;
    std::size_t request_count = 0;
    std::size_t extraction_failures = 0;
    double wall_time_ms = 0.0;  // joined in from the timing sidecar
};

std::vector<DumpRecord> read_predictions_jsonl(std::istream& in);
/// source_id -> wall_time_ms
std::vector<std::pair<std::string, double>> read_timings_jsonl(std::istream& in);

}  // namespace postag
