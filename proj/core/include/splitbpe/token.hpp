#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace splitbpe {

enum class TokenKind {
    Identifier,
    Keyword,
    NumberLiteral,
    StringLiteral,
    CharLiteral,
    Punctuation,
    Placeholder,
};

std::string_view token_kind_name(TokenKind kind);

// Reserved texts. Placeholder tokens use exactly one of these; BPE treats
// them as atomic units that never split into characters.
inline constexpr std::string_view kStringPlaceholder = "<str>";
inline constexpr std::string_view kNumberPlaceholder = "<num>";
inline constexpr std::string_view kUnknownUnit = "<unk>";

inline bool is_reserved_text(std::string_view text) {
    return text == kStringPlaceholder || text == kNumberPlaceholder ||
           text == kUnknownUnit;
}

// Byte range in the originating file.
struct Span {
    size_t offset = 0;
    size_t length = 0;
};

struct Token {
    std::string text;  // exact source substring, or a reserved placeholder
    TokenKind kind = TokenKind::Punctuation;
    Span span;
    uint32_t file_id = 0;
};

}  // namespace splitbpe
