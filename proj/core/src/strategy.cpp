#include "splitbpe/strategy.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "splitbpe/errors.hpp"
#include "splitbpe/version.hpp"

namespace splitbpe {

namespace {

const FrequencyTable& require_table(const PipelineConfig& config) {
    if (config.split_table == nullptr) {
        throw MissingTableError(std::string("strategy '") +
                                std::string(strategy_name(config.strategy)) +
                                "' requires a frequency table");
    }
    return *config.split_table;
}

// Identifier -> one token per split piece. Piece spans are sub-spans of the
// original token, so coverage bookkeeping survives splitting.
void append_split_tokens(const Token& token, const FrequencyTable& table,
                         const SplitOptions& options, std::vector<Token>& out) {
    size_t offset = 0;
    for (const std::string& piece : split(token.text, table, options).pieces) {
        TokenKind kind =
            piece[0] == '_' ? TokenKind::Punctuation : TokenKind::Identifier;
        out.push_back(Token{piece, kind,
                            Span{token.span.offset + offset, piece.size()},
                            token.file_id});
        offset += piece.size();
    }
}

std::vector<Token> split_all_identifiers(const std::vector<Token>& tokens,
                                         const FrequencyTable& table,
                                         const SplitOptions& options) {
    std::vector<Token> out;
    out.reserve(tokens.size());
    for (const Token& token : tokens) {
        if (is_identifier(token)) {
            append_split_tokens(token, table, options, out);
        } else {
            out.push_back(token);
        }
    }
    return out;
}

void remark(std::vector<std::string>& units) {
    for (size_t i = 0; i + 1 < units.size(); ++i) {
        units[i].append(kContinuationMarker);
    }
}

// Split-then-encode: encode each piece, concatenate, and re-marker so only
// the token's final unit is unmarked.
std::vector<std::string> encode_split(const Token& token,
                                      const Vocabulary& vocab,
                                      const FrequencyTable& table,
                                      const SplitOptions& options) {
    std::vector<std::string> units;
    for (const std::string& piece : split(token.text, table, options).pieces) {
        for (std::string& unit : encode_units(piece, vocab)) {
            units.push_back(std::move(unit));
        }
    }
    remark(units);
    return units;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
    switch (strategy) {
        case Strategy::Original: return "original";
        case Strategy::Simple: return "simple";
        case Strategy::Hybrid: return "hybrid";
    }
    return "unknown";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
    if (name == "original") return Strategy::Original;
    if (name == "simple") return Strategy::Simple;
    if (name == "hybrid") return Strategy::Hybrid;
    return std::nullopt;
}

std::vector<Token> build_vocab_corpus(const std::vector<Token>& tokens,
                                      const PipelineConfig& config) {
    switch (config.strategy) {
        case Strategy::Original:
            return tokens;
        case Strategy::Simple:
            return split_all_identifiers(tokens, require_table(config),
                                         config.split_options);
        case Strategy::Hybrid: {
            const FrequencyTable& table = require_table(config);
            std::vector<Token> split_tokens =
                split_all_identifiers(tokens, table, config.split_options);
            std::vector<Token> out;
            for (int i = 0; i < config.hybrid_raw_copies; ++i) {
                out.insert(out.end(), tokens.begin(), tokens.end());
            }
            for (int i = 0; i < config.hybrid_split_copies; ++i) {
                out.insert(out.end(), split_tokens.begin(), split_tokens.end());
            }
            return out;
        }
    }
    return tokens;
}

std::vector<std::string> process_input_token(const Token& token,
                                             const Vocabulary& vocab,
                                             const PipelineConfig& config) {
    if (!is_identifier(token) || config.strategy == Strategy::Original) {
        return encode(token.text, vocab);
    }
    const FrequencyTable& table = require_table(config);
    if (config.strategy == Strategy::Hybrid && is_single_unit(token.text, vocab)) {
        return {token.text};
    }
    return encode_split(token, vocab, table, config.split_options);
}

SubwordStream process_file_tokens(const std::vector<Token>& tokens,
                                  const Vocabulary& vocab,
                                  const PipelineConfig& config) {
    SubwordStream stream;
    for (const Token& token : tokens) {
        std::vector<std::string> units = process_input_token(token, vocab, config);
        stream.token_spans.push_back(
            TokenSpan{stream.units.size(), units.size(), token.kind});
        for (std::string& unit : units) {
            stream.units.push_back(std::move(unit));
        }
    }
    return stream;
}

ShrinkageReport corpus_shrinkage(const std::vector<Token>& tokens,
                                 const FrequencyTable& table,
                                 const SplitOptions& options) {
    std::set<std::string> before;
    std::set<std::string> after;
    for (const Token& token : tokens) {
        before.insert(token.text);
        if (is_identifier(token)) {
            for (const std::string& piece : split(token.text, table, options).pieces) {
                after.insert(piece);
            }
        } else {
            after.insert(token.text);
        }
    }
    ShrinkageReport report;
    report.unique_before = before.size();
    report.unique_after = after.size();
    report.ratio = before.empty()
                       ? 0.0
                       : 1.0 - static_cast<double>(after.size()) /
                                   static_cast<double>(before.size());
    return report;
}

void save_stream_file(std::ostream& os,
                      const std::vector<SubwordStream>& streams,
                      const std::map<std::string, std::string>& header) {
    os << "# " << kStreamFormat << "\n";
    for (const auto& [key, value] : header) {
        os << "# " << key << "=" << value << "\n";
    }
    for (size_t f = 0; f < streams.size(); ++f) {
        if (f > 0) os << "\n";
        for (const std::string& unit : streams[f].units) {
            os << unit << "\n";
        }
    }
}

StreamFile load_stream_file(std::istream& is) {
    StreamFile out;
    out.files.emplace_back();
    std::string line;
    bool saw_units = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            size_t eq = body.find('=');
            if (eq != std::string::npos) {
                out.header[body.substr(0, eq)] = body.substr(eq + 1);
            }
            continue;
        }
        if (line.empty()) {
            if (saw_units && !out.files.back().empty()) {
                out.files.emplace_back();
            }
            continue;
        }
        out.files.back().push_back(line);
        saw_units = true;
    }
    if (!out.files.empty() && out.files.back().empty()) {
        out.files.pop_back();
    }
    return out;
}

}  // namespace splitbpe
