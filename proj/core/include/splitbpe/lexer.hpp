#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "splitbpe/token.hpp"

namespace splitbpe {

struct LexOptions {
    // String literals whose raw content (bytes between the quotes) is longer
    // than this are replaced by the "<str>" placeholder.
    size_t max_string_content = 15;
};

enum class RemovedReason { Whitespace, Comment, NonAscii };

struct RemovedRegion {
    Span span;
    RemovedReason reason;
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<RemovedRegion> removed;  // source order, interleaved with tokens
};

// Tokenizes C-family source. Lexing is total: content that survives no rule
// (comments, whitespace, tokens containing non-ASCII bytes) becomes a removed
// region, never a failure. Token spans plus removed regions partition the
// input exactly.
LexResult lex_file_full(std::string_view source, uint32_t file_id,
                        const LexOptions& options = {});

std::vector<Token> lex_file(std::string_view source, uint32_t file_id,
                            const LexOptions& options = {});

inline bool is_identifier(const Token& token) {
    return token.kind == TokenKind::Identifier;
}

// The fixed C11 keyword set used to separate keywords from identifiers.
std::span<const std::string_view> c_keywords();
bool is_c_keyword(std::string_view word);

}  // namespace splitbpe
