#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "postag/errors.hpp"
#include "postag/tagset.hpp"

namespace postag {

struct Token {
    std::string surface;
    std::optional<PosTag> gold_tag;
    std::size_t index = 0;

    bool operator==(const Token&) const = default;
};

struct Sentence {
    std::vector<Token> tokens;
    std::string language;
    std::string source_id;

    std::size_t size() const { return tokens.size(); }
    /// Surfaces joined with single spaces (the "Sentence:" line text).
    std::string text() const;
    bool fully_tagged() const;

    bool operator==(const Sentence&) const = default;
};

enum class CorpusShare { High, Low };

struct LanguageMeta {
    std::string code;
    std::string family;
    bool script_known = false;  // Latin/Cyrillic script
    CorpusShare share = CorpusShare::Low;
};

struct ParseOptions {
    /// Language code stamped on every parsed sentence.
    std::string language;
    /// When true a token line whose UPOS column is `_` is an error
    /// (evaluation sets must be fully tagged). When false the tag is
    /// simply absent, which is what demonstration mining wants.
    bool require_gold_tags = false;
};

/// Parses CoNLL-U: 10 tab-separated columns per token line, `#` comments,
/// blank-line sentence separators. Multiword-token ranges ("3-4") and
/// empty nodes ("5.1") are skipped. Column 2 is the surface form, column 4
/// the UPOS tag.
std::vector<Sentence> parse_conllu(std::istream& input, const ParseOptions& opts = {});
std::vector<Sentence> parse_conllu_file(const std::string& path, const ParseOptions& opts = {});

/// Serializes with columns 1, 2 and 4 populated and `_` elsewhere;
/// re-parsing the output yields an equal sentence.
std::string to_conllu(const Sentence& sentence);

/// Draws up to n sentences without replacement with the pinned seeded
/// sampler; a corpus of size <= n comes back whole, in original order.
std::vector<Sentence> sample_instances(const std::vector<Sentence>& corpus, std::size_t n,
                                       std::uint64_t seed);

class LanguageMetaMap {
public:
    LanguageMetaMap() = default;
    explicit LanguageMetaMap(std::map<std::string, LanguageMeta> entries)
        : entries_(std::move(entries)) {}

    /// Throws UnknownLanguageError for absent codes.
    const LanguageMeta& lookup(const std::string& code) const;
    bool contains(const std::string& code) const { return entries_.count(code) > 0; }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, LanguageMeta>& entries() const { return entries_; }

private:
    std::map<std::string, LanguageMeta> entries_;
};

/// Loads the tab-separated metadata file: code, family, script_known,
/// corpus_share_class; `#` comments and blank lines ignored.
LanguageMetaMap load_language_meta(const std::string& path);
LanguageMetaMap parse_language_meta(std::istream& input);

}  // namespace postag
