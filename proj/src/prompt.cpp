#include "postag/prompt.hpp"

#include <algorithm>
#include <stdexcept>

#include "postag/random.hpp"

namespace postag {

namespace {

void replace_all(std::string& text, std::string_view slot, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
}

std::string fill(const std::string& pattern, const Sentence& sentence,
                 const std::string& token, std::string_view label, QuoteStyle quotes) {
    std::string out = pattern;
    replace_all(out, "{sentence}", sentence.text());
    replace_all(out, "{token}", token);
    replace_all(out, "{label}", label);
    replace_all(out, "{open}", quotes == QuoteStyle::Ascii ? "'" : "`");
    replace_all(out, "{close}", "'");
    return out;
}

bool contains_surface(const Sentence& sentence, const std::string& token) {
    return std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                       [&](const Token& t) { return t.surface == token; });
}

}  // namespace

void PromptTemplate::validate() const {
    if (!query_pattern.ends_with("is a kind of"))
        throw ConfigError("query template must end with \"is a kind of\"");
    if (!demo_pattern.ends_with("{label}."))
        throw ConfigError("demo template must end with \"{label}.\"");
    if (query_pattern.find("{token}") == std::string::npos ||
        demo_pattern.find("{token}") == std::string::npos)
        throw ConfigError("prompt templates must mention {token}");
}

std::string render_query(const Sentence& x, std::size_t token_index,
                         const PromptTemplate& tmpl) {
    if (token_index >= x.size())
        throw std::out_of_range("token index " + std::to_string(token_index) +
                                " out of range for sentence of length " +
                                std::to_string(x.size()));
    std::string display = x.tokens[token_index].surface;
    if (tmpl.occurrence_suffix) {
        std::size_t total = 0, ordinal = 0;
        for (const Token& t : x.tokens) {
            if (t.surface != display) continue;
            ++total;
            if (t.index <= token_index) ++ordinal;
        }
        if (total > 1) display += " #" + std::to_string(ordinal);
    }
    return fill(tmpl.query_pattern, x, display, "", tmpl.quote_style);
}

std::string render_demo(const Sentence& context, const std::string& token, PosTag label,
                        const PromptTemplate& tmpl) {
    if (!contains_surface(context, token))
        throw PromptError("demonstration token '" + token +
                          "' does not occur in its context sentence");
    return fill(tmpl.demo_pattern, context, token, to_string(label), tmpl.quote_style) +
           tmpl.separator;
}

std::string build_demonstrations(std::span<const Demonstration> demos,
                                 const std::optional<std::string>& instruction,
                                 const PromptTemplate& tmpl) {
    std::string out;
    if (instruction) out += *instruction + tmpl.separator;
    for (const Demonstration& d : demos) out += render_demo(d.context, d.token, d.label, tmpl);
    return out;
}

std::string build_demonstrations(const DemonstrationSet& set, const PromptTemplate& tmpl) {
    return build_demonstrations(set.demos, set.instruction, tmpl);
}

PromptSet generate_prompts(const Sentence& x, const std::string& demonstration_prefix,
                           const PromptTemplate& tmpl) {
    PromptSet set;
    set.sentence = x;
    set.prompts.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        set.prompts.push_back(demonstration_prefix + render_query(x, i, tmpl));
    return set;
}

std::string render_iterative(const Sentence& x, std::span<const PosTag> predicted_prefix,
                             std::span<const Sentence> demos,
                             const std::optional<std::string>& instruction) {
    if (predicted_prefix.size() >= x.size())
        throw std::out_of_range("predicted prefix of length " +
                                std::to_string(predicted_prefix.size()) +
                                " leaves nothing to decode in a sentence of length " +
                                std::to_string(x.size()));
    std::string out;
    if (instruction) out += *instruction + "\n";
    for (const Sentence& demo : demos) {
        out += "Context: " + demo.text() + "\n";
        out += "Tagged:";
        for (const Token& t : demo.tokens) {
            if (!t.gold_tag)
                throw PromptError("iterative demonstration sentence '" + demo.source_id +
                                  "' is not fully tagged");
            out += ' ';
            out += t.surface;
            out += '_';
            out += to_string(*t.gold_tag);
        }
        out += '\n';
    }
    if (demos.empty()) {
        out += "Sentence: " + x.text() + "\n";
    } else {
        out += "Context: " + x.text() + "\n";
        out += "Tagged: ";
    }
    for (std::size_t i = 0; i < predicted_prefix.size(); ++i) {
        out += x.tokens[i].surface;
        out += '_';
        out += to_string(predicted_prefix[i]);
        out += ' ';
    }
    out += x.tokens[predicted_prefix.size()].surface;
    out += '_';
    return out;
}

const std::array<PosTag, kTagCount>& demo_tag_order() {
    // The order the published few-shot prompt presents its examples in.
    static const std::array<PosTag, kTagCount> order = {
        PosTag::SCONJ, PosTag::ADJ,  PosTag::NOUN,  PosTag::ADP,  PosTag::AUX,
        PosTag::DET,   PosTag::ADV,  PosTag::VERB,  PosTag::PUNCT, PosTag::CCONJ,
        PosTag::X,     PosTag::PRON, PosTag::PART,  PosTag::PROPN, PosTag::NUM,
        PosTag::INTJ,  PosTag::SYM,
    };
    return order;
}

std::vector<Demonstration> select_fewshot_examples(const std::vector<Sentence>& train,
                                                   std::uint64_t seed, DemoOrder order) {
    // Occurrence lists per tag, in corpus order, so the seeded pick is
    // reproducible for a given corpus.
    std::array<std::vector<std::pair<std::size_t, std::size_t>>, kTagCount> occurrences;
    for (std::size_t s = 0; s < train.size(); ++s) {
        for (const Token& t : train[s].tokens) {
            if (t.gold_tag) occurrences[tag_index(*t.gold_tag)].emplace_back(s, t.index);
        }
    }

    const auto& tags =
        order == DemoOrder::Canonical ? demo_tag_order() : all_tags();
    SampleRng rng(seed);
    std::vector<Demonstration> demos;
    demos.reserve(kTagCount);
    for (PosTag tag : tags) {
        const auto& occs = occurrences[tag_index(tag)];
        if (occs.empty())
            throw PromptError("training corpus has no occurrence of tag " +
                              std::string(to_string(tag)));
        const auto& [sent_idx, tok_idx] = occs[rng.below(occs.size())];
        demos.push_back(Demonstration{train[sent_idx],
                                      train[sent_idx].tokens[tok_idx].surface, tag});
    }
    return demos;
}

}  // namespace postag
