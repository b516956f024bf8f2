#include "postag/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "postag/random.hpp"

namespace postag {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool is_all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

// Multiword-token range line, e.g. "3-4".
bool is_mwt_range(const std::string& id) {
    std::size_t dash = id.find('-');
    if (dash == std::string::npos) return false;
    return is_all_digits(id.substr(0, dash)) && is_all_digits(id.substr(dash + 1));
}

// Empty-node line, e.g. "5.1".
bool is_empty_node(const std::string& id) {
    std::size_t dot = id.find('.');
    if (dot == std::string::npos) return false;
    return is_all_digits(id.substr(0, dot)) && is_all_digits(id.substr(dot + 1));
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string Sentence::text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i].surface;
    }
    return out;
}

bool Sentence::fully_tagged() const {
    return std::all_of(tokens.begin(), tokens.end(),
                       [](const Token& t) { return t.gold_tag.has_value(); });
}

std::vector<Sentence> parse_conllu(std::istream& input, const ParseOptions& opts) {
    std::vector<Sentence> sentences;
    Sentence current;
    current.language = opts.language;
    std::string pending_sent_id;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (!current.tokens.empty()) {
            current.source_id = pending_sent_id.empty()
                                    ? "s" + std::to_string(sentences.size() + 1)
                                    : pending_sent_id;
            sentences.push_back(std::move(current));
        }
        current = Sentence{};
        current.language = opts.language;
        pending_sent_id.clear();
    };

    std::string raw;
    while (std::getline(input, raw)) {
        ++line_no;
        std::string line = strip_cr(std::move(raw));
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') {
            static constexpr std::string_view kSentId = "# sent_id = ";
            if (line.rfind(kSentId, 0) == 0) pending_sent_id = line.substr(kSentId.size());
            continue;
        }

        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 10)
            throw ParseError("expected 10 tab-separated columns, got " +
                                 std::to_string(cols.size()),
                             line_no);
        const std::string& id = cols[0];
        if (is_mwt_range(id) || is_empty_node(id)) continue;
        if (!is_all_digits(id)) throw ParseError("bad token id '" + id + "'", line_no);

        Token token;
        token.surface = cols[1];
        if (token.surface.empty())
            throw ParseError("empty surface form", line_no);
        if (token.surface.find('\n') != std::string::npos)
            throw ParseError("surface form contains newline", line_no);

        const std::string& upos = cols[3];
        if (upos == "_") {
            if (opts.require_gold_tags)
                throw ParseError("missing UPOS tag for '" + token.surface + "'", line_no);
        } else {
            std::optional<PosTag> tag = parse_tag(upos);
            if (!tag) throw ParseError("UPOS '" + upos + "' is not in the tag set", line_no);
            token.gold_tag = tag;
        }
        token.index = current.tokens.size();
        current.tokens.push_back(std::move(token));
    }
    flush();
    return sentences;
}

std::vector<Sentence> parse_conllu_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CoNLL-U file: " + path);
    return parse_conllu(in, opts);
}

std::string to_conllu(const Sentence& sentence) {
    std::string out;
    if (!sentence.source_id.empty()) out += "# sent_id = " + sentence.source_id + "\n";
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
        const Token& t = sentence.tokens[i];
        out += std::to_string(i + 1);
        out += '\t';
        out += t.surface;
        out += "\t_\t";
        out += t.gold_tag ? std::string(to_string(*t.gold_tag)) : "_";
        out += "\t_\t_\t_\t_\t_\t_\n";
    }
    out += '\n';
    return out;
}

std::vector<Sentence> sample_instances(const std::vector<Sentence>& corpus, std::size_t n,
                                       std::uint64_t seed) {
    if (corpus.size() <= n) return corpus;
    std::vector<std::size_t> idx = sample_indices(corpus.size(), n, seed);
    std::vector<Sentence> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(corpus[i]);
    return out;
}

const LanguageMeta& LanguageMetaMap::lookup(const std::string& code) const {
    auto it = entries_.find(code);
    if (it == entries_.end()) throw UnknownLanguageError(code);
    return it->second;
}

LanguageMetaMap parse_language_meta(std::istream& input) {
    std::map<std::string, LanguageMeta> entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(input, raw)) {
        ++line_no;
        std::string line = strip_cr(std::move(raw));
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 4)
            throw ParseError("language metadata needs 4 columns (code, family, "
                             "script_known, corpus_share_class)",
                             line_no);
        LanguageMeta meta;
        meta.code = cols[0];
        meta.family = cols[1];
        if (cols[2] == "true" || cols[2] == "1")
            meta.script_known = true;
        else if (cols[2] == "false" || cols[2] == "0")
            meta.script_known = false;
        else
            throw ParseError("script_known must be true/false", line_no);
        if (cols[3] == "High" || cols[3] == "high" || cols[3] == "H")
            meta.share = CorpusShare::High;
        else if (cols[3] == "Low" || cols[3] == "low" || cols[3] == "L")
            meta.share = CorpusShare::Low;
        else
            throw ParseError("corpus_share_class must be High/Low", line_no);
        entries[meta.code] = std::move(meta);
    }
    return LanguageMetaMap(std::move(entries));
}

LanguageMetaMap load_language_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open language metadata file: " + path);
    return parse_language_meta(in);
}

}  // namespace postag
