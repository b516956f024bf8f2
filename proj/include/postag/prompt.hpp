#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postag/corpus.hpp"
#include "postag/tagset.hpp"

namespace postag {

/// Quote characters around the queried token. The published figures
/// typeset `x' (backtick/apostrophe); the default canonicalizes both
/// sides to ASCII apostrophes, which is byte-stable across tokenizers.
enum class QuoteStyle { Ascii, Typeset };

struct PromptTemplate {
    /// Rendered query must end exactly with "is a kind of" so the next
    /// generated or scored token is the label.
    std::string query_pattern =
        "Sentence: {sentence}\n"
        "In the sentence, the part-of-speech tag of {open}{token}{close} is a kind of";
    /// Rendered demo ends with the label and a period.
    std::string demo_pattern =
        "Sentence: {sentence}\n"
        "In the sentence, the part-of-speech tag of {open}{token}{close} is a kind of {label}.";
    /// Terminates every concatenated segment (instruction, each demo).
    std::string separator = "\n";
    QuoteStyle quote_style = QuoteStyle::Ascii;
    /// Non-faithful opt-in: when a surface occurs more than once in the
    /// sentence, the query names it as "surface #k". Off by default;
    /// the faithful behavior gives duplicate surfaces identical prompts
    /// (first-occurrence semantics at scoring time).
    bool occurrence_suffix = false;

    /// Enforces the structural invariants a custom template must keep:
    /// the query ends with "is a kind of", the demo ends with "{label}."
    /// and both mention {token}. Throws ConfigError.
    void validate() const;
};

struct Demonstration {
    Sentence context;
    std::string token;
    PosTag label;
};

struct DemonstrationSet {
    std::optional<std::string> instruction;
    std::vector<Demonstration> demos;

    std::size_t k() const { return demos.size(); }
};

struct PromptSet {
    std::vector<std::string> prompts;  // one per token, same order
    Sentence sentence;
};

/// "Sentence: <X>\nIn the sentence, the part-of-speech tag of 'x_i' is a
/// kind of" — never ends in whitespace.
std::string render_query(const Sentence& x, std::size_t token_index,
                         const PromptTemplate& tmpl = {});

/// Same shape but closing with the label: "... is a kind of AUX." plus
/// the segment separator. Throws PromptError when the token does not
/// occur in the context sentence.
std::string render_demo(const Sentence& context, const std::string& token, PosTag label,
                        const PromptTemplate& tmpl = {});

/// Instruction (if any), then the demos in order, each segment terminated
/// by the separator. k = 0 with an instruction yields the zero-shot
/// prefix; k = 0 without one yields empty text.
std::string build_demonstrations(std::span<const Demonstration> demos,
                                 const std::optional<std::string>& instruction,
                                 const PromptTemplate& tmpl = {});
std::string build_demonstrations(const DemonstrationSet& set,
                                 const PromptTemplate& tmpl = {});

/// One independent prompt per token: prompt_i = D + query(X, i).
PromptSet generate_prompts(const Sentence& x, const std::string& demonstration_prefix,
                           const PromptTemplate& tmpl = {});

/// The iterative baseline's prompt. Demonstrations are fully tagged
/// sentences rendered as Context:/Tagged: blocks; the target block shows
/// the already-predicted prefix as "surface_TAG" pairs and leaves
/// "surface_" dangling for the model to complete. With no demonstrations
/// the target block uses the zero-shot "Sentence:" layout.
std::string render_iterative(const Sentence& x, std::span<const PosTag> predicted_prefix,
                             std::span<const Sentence> demos,
                             const std::optional<std::string>& instruction);

/// The fixed demonstration order (by tag) used for few-shot prompts.
const std::array<PosTag, kTagCount>& demo_tag_order();

enum class DemoOrder { Canonical, Alphabetical };

/// Picks one (context, token, label) triple per tag from the training
/// corpus, deterministically under the seed. Throws PromptError naming
/// the first tag that has no occurrence.
std::vector<Demonstration> select_fewshot_examples(const std::vector<Sentence>& train,
                                                   std::uint64_t seed,
                                                   DemoOrder order = DemoOrder::Canonical);

}  // namespace postag
