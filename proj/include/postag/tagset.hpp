#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace postag {

/// The 17 universal POS tags, in canonical (alphabetical) order. The enum
/// order is load-bearing: it is the deterministic tie-break order for
/// argmax decisions and the order used in the task instruction line.
enum class PosTag : std::uint8_t {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
};

inline constexpr std::size_t kTagCount = 17;

/// All tags in canonical order.
const std::array<PosTag, kTagCount>& all_tags();

std::string_view to_string(PosTag tag);

/// Case-sensitive parse; anything outside the 17 canonical labels fails.
std::optional<PosTag> parse_tag(std::string_view text);

inline std::size_t tag_index(PosTag tag) { return static_cast<std::size_t>(tag); }

/// The task instruction used in zero-shot prompting: the tag set spelled
/// out in canonical order.
const std::string& default_instruction();

}  // namespace postag
