#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "postag/backend.hpp"
#include "postag/prompt.hpp"

namespace postag {

enum class Method { Decom, Iter };
enum class Mode { Prob, Gen };

std::string_view to_string(Method m);
std::string_view to_string(Mode m);
std::optional<Method> parse_method(std::string_view text);
std::optional<Mode> parse_mode(std::string_view text);

struct RunConfig {
    Method method = Method::Decom;
    Mode mode = Mode::Prob;
    int shots = 0;
    bool with_instruction = true;
    std::vector<std::string> languages;
    std::size_t sample_size = 200;
    std::uint64_t seed = 42;
    std::string sampler = "fisher_yates_mt19937_64";
    BackendConfig backend;

    std::string corpus_dir;    // <dir>/<lang>.conllu
    std::string demo_corpus;   // English training file for demonstrations
    std::string meta_path;     // language metadata
    std::string output_dir;

    std::optional<std::string> instruction_override;
    std::optional<std::string> query_pattern_override;
    std::optional<std::string> demo_pattern_override;
    std::optional<std::string> separator_override;
    QuoteStyle quote_style = QuoteStyle::Ascii;
    bool occurrence_suffix = false;  // non-faithful duplicate-token marking
    int gen_max_tokens = 8;

    bool operator==(const RunConfig&) const = default;

    /// Throws ConfigError on invalid combinations (prob mode outside the
    /// decomposed method, unknown sampler, no languages, ...).
    void validate() const;

    PromptTemplate prompt_template() const;
    /// The instruction actually attached to prompts, or nullopt when
    /// demonstrations alone carry the context.
    std::optional<std::string> instruction() const;

    std::string to_json_string() const;
    static RunConfig from_json_string(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
};

/// Directory a single (method, mode, shots, language) run writes into.
std::string run_subdir(const RunConfig& config, const std::string& language);
/// The per-language dirs' common parent ("<method>-<mode>-k<shots>[-instr]").
std::string run_root(const RunConfig& config);

}  // namespace postag
