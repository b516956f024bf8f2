#include "postag/tagset.hpp"

namespace postag {

namespace {

constexpr std::array<std::string_view, kTagCount> kTagNames = {
    "ADJ",  "ADP",  "ADV",   "AUX",   "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM",  "VERB", "X",
};

}  // namespace

const std::array<PosTag, kTagCount>& all_tags() {
    static const std::array<PosTag, kTagCount> tags = [] {
        std::array<PosTag, kTagCount> out{};
        for (std::size_t i = 0; i < kTagCount; ++i) out[i] = static_cast<PosTag>(i);
        return out;
    }();
    return tags;
}

std::string_view to_string(PosTag tag) { return kTagNames[tag_index(tag)]; }

std::optional<PosTag> parse_tag(std::string_view text) {
    for (std::size_t i = 0; i < kTagCount; ++i) {
        if (kTagNames[i] == text) return static_cast<PosTag>(i);
    }
    return std::nullopt;
}

const std::string& default_instruction() {
    static const std::string instruction = [] {
        std::string s = "POS tag set:";
        for (PosTag tag : all_tags()) {
            s += ' ';
            s += to_string(tag);
        }
        return s;
    }();
    return instruction;
}

}  // namespace postag
