#include "splitbpe/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace splitbpe {

namespace {

constexpr std::array<std::string_view, 44> kC11Keywords = {
    "_Alignas",  "_Alignof", "_Atomic",  "_Bool",     "_Complex",
    "_Generic",  "_Imaginary", "_Noreturn", "_Static_assert", "_Thread_local",
    "auto",      "break",    "case",     "char",      "const",
    "continue",  "default",  "do",       "double",    "else",
    "enum",      "extern",   "float",    "for",       "goto",
    "if",        "inline",   "int",      "long",      "register",
    "restrict",  "return",   "short",    "signed",    "sizeof",
    "static",    "struct",   "switch",   "typedef",   "union",
    "unsigned",  "void",     "volatile", "while",
};

// Multi-character C operators, longest first so maximal munch works by
// scanning the table in order.
constexpr std::string_view kMultiCharOperators[] = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=", "&=",
    "^=",  "|=",  "##",
};

bool is_space_byte(unsigned char c) {
    // Control bytes outside the token grammar are treated as whitespace so
    // that lexing stays total on arbitrary input.
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f' || c < 0x20 || c == 0x7f;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_word_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           c >= 0x80;
}

bool is_word_char(unsigned char c) { return is_word_start(c) || is_digit(c); }

bool is_number_char(unsigned char c) {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           c == '.';
}

bool has_high_byte(std::string_view text) {
    return std::any_of(text.begin(), text.end(),
                       [](unsigned char c) { return c >= 0x80; });
}

bool has_space_byte(std::string_view text) {
    return std::any_of(text.begin(), text.end(),
                       [](unsigned char c) { return is_space_byte(c); });
}

class Scanner {
public:
    Scanner(std::string_view source, uint32_t file_id, const LexOptions& options)
        : src_(source), file_id_(file_id), options_(options) {}

    LexResult run() {
        while (pos_ < src_.size()) {
            unsigned char c = at(pos_);
            if (is_space_byte(c)) {
                scan_run(RemovedReason::Whitespace,
                         [](unsigned char b) { return is_space_byte(b); });
            } else if (c == '/' && at(pos_ + 1) == '/') {
                scan_line_comment();
            } else if (c == '/' && at(pos_ + 1) == '*') {
                scan_block_comment();
            } else if (c == '"' || c == '\'') {
                scan_char_or_string(c);
            } else if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) {
                scan_number();
            } else if (is_word_start(c)) {
                scan_word();
            } else {
                scan_operator();
            }
        }
        return std::move(result_);
    }

private:
    unsigned char at(size_t i) const {
        return i < src_.size() ? static_cast<unsigned char>(src_[i]) : 0;
    }

    std::string_view slice(size_t begin, size_t end) const {
        return src_.substr(begin, end - begin);
    }

    void emit(size_t begin, size_t end, TokenKind kind) {
        result_.tokens.push_back(Token{std::string(slice(begin, end)), kind,
                                       Span{begin, end - begin}, file_id_});
    }

    void emit_placeholder(size_t begin, size_t end, std::string_view text) {
        result_.tokens.push_back(Token{std::string(text), TokenKind::Placeholder,
                                       Span{begin, end - begin}, file_id_});
    }

    void remove(size_t begin, size_t end, RemovedReason reason) {
        result_.removed.push_back(RemovedRegion{Span{begin, end - begin}, reason});
    }

    template <typename Pred>
    void scan_run(RemovedReason reason, Pred pred) {
        size_t begin = pos_;
        while (pos_ < src_.size() && pred(at(pos_))) ++pos_;
        remove(begin, pos_, reason);
    }

    void scan_line_comment() {
        size_t begin = pos_;
        pos_ += 2;
        while (pos_ < src_.size() && at(pos_) != '\n') ++pos_;
        remove(begin, pos_, RemovedReason::Comment);
    }

    void scan_block_comment() {
        size_t begin = pos_;
        pos_ += 2;
        while (pos_ < src_.size() &&
               !(at(pos_) == '*' && at(pos_ + 1) == '/')) {
            ++pos_;
        }
        pos_ = std::min(pos_ + 2, src_.size());
        remove(begin, pos_, RemovedReason::Comment);
    }

    // Strings and char literals share one scan. A literal ends at its closing
    // quote, or unterminated at a raw newline / end of input. Escapes consume
    // the next byte, so escaped quotes and line splices stay inside.
    void scan_char_or_string(unsigned char quote) {
        size_t begin = pos_;
        ++pos_;
        bool terminated = false;
        while (pos_ < src_.size()) {
            unsigned char c = at(pos_);
            if (c == '\\' && pos_ + 1 < src_.size()) {
                pos_ += 2;
                continue;
            }
            if (c == quote) {
                ++pos_;
                terminated = true;
                break;
            }
            if (c == '\n') break;  // unterminated literal
            ++pos_;
        }

        std::string_view text = slice(begin, pos_);
        if (has_high_byte(text)) {
            remove(begin, pos_, RemovedReason::NonAscii);
            return;
        }
        size_t content = terminated ? text.size() - 2 : text.size() - 1;
        bool over_long =
            quote == '"' && terminated && content > options_.max_string_content;
        // Token texts must stay whitespace-free, so literals that embed
        // whitespace take the placeholder as well; unterminated literals are
        // malformed source and get the same treatment.
        if (over_long || !terminated || has_space_byte(text)) {
            emit_placeholder(begin, pos_, kStringPlaceholder);
            return;
        }
        emit(begin, pos_, quote == '"' ? TokenKind::StringLiteral
                                       : TokenKind::CharLiteral);
    }

    // Preprocessing-number style scan: covers decimal, hex, octal, floats,
    // suffixes, and exponent signs in one pass.
    void scan_number() {
        size_t begin = pos_;
        while (pos_ < src_.size()) {
            unsigned char c = at(pos_);
            if (is_number_char(c)) {
                ++pos_;
                continue;
            }
            unsigned char prev = at(pos_ - 1);
            bool exponent_sign =
                (c == '+' || c == '-') &&
                (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P');
            if (exponent_sign) {
                ++pos_;
                continue;
            }
            break;
        }
        emit(begin, pos_, TokenKind::NumberLiteral);
    }

    // Identifier-shaped runs. Bytes >= 0x80 glue onto the run so that a
    // non-ASCII identifier drops as one region rather than shedding an ASCII
    // tail back into the stream.
    void scan_word() {
        size_t begin = pos_;
        while (pos_ < src_.size() && is_word_char(at(pos_))) ++pos_;
        std::string_view text = slice(begin, pos_);
        if (has_high_byte(text)) {
            remove(begin, pos_, RemovedReason::NonAscii);
            return;
        }
        emit(begin, pos_, is_c_keyword(text) ? TokenKind::Keyword
                                             : TokenKind::Identifier);
    }

    void scan_operator() {
        for (std::string_view op : kMultiCharOperators) {
            if (src_.substr(pos_).starts_with(op)) {
                emit(pos_, pos_ + op.size(), TokenKind::Punctuation);
                pos_ += op.size();
                return;
            }
        }
        emit(pos_, pos_ + 1, TokenKind::Punctuation);
        ++pos_;
    }

    std::string_view src_;
    uint32_t file_id_;
    LexOptions options_;
    size_t pos_ = 0;
    LexResult result_;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Keyword: return "keyword";
        case TokenKind::NumberLiteral: return "number";
        case TokenKind::StringLiteral: return "string";
        case TokenKind::CharLiteral: return "char";
        case TokenKind::Punctuation: return "punctuation";
        case TokenKind::Placeholder: return "placeholder";
    }
    return "unknown";
}

std::span<const std::string_view> c_keywords() {
    return std::span<const std::string_view>(kC11Keywords);
}

bool is_c_keyword(std::string_view word) {
    return std::binary_search(kC11Keywords.begin(), kC11Keywords.end(), word);
}

LexResult lex_file_full(std::string_view source, uint32_t file_id,
                        const LexOptions& options) {
    return Scanner(source, file_id, options).run();
}

std::vector<Token> lex_file(std::string_view source, uint32_t file_id,
                            const LexOptions& options) {
    return lex_file_full(source, file_id, options).tokens;
}

}  // namespace splitbpe
