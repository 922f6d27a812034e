#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitbpe/bpe.hpp"
#include "splitbpe/splitter.hpp"
#include "splitbpe/token.hpp"

namespace splitbpe {

// The three pipeline configurations: Original applies BPE alone; Simple
// splits every identifier before BPE in both vocabulary construction and
// input processing; Hybrid trains on merged raw+split corpora and splits an
// input identifier only when it is not already a single vocabulary unit.
enum class Strategy { Original, Simple, Hybrid };

std::string_view strategy_name(Strategy strategy);
std::optional<Strategy> strategy_from_name(std::string_view name);

struct PipelineConfig {
    Strategy strategy = Strategy::Original;
    size_t vocab_size = 10000;
    // Required whenever strategy != Original.
    const FrequencyTable* split_table = nullptr;
    SplitOptions split_options;
    // Corpus copies concatenated for Hybrid vocabulary construction.
    int hybrid_raw_copies = 1;
    int hybrid_split_copies = 1;
};

// Token stream fed to BPE training under the configured strategy. Simple
// replaces each identifier with its split pieces (separators become
// punctuation); Hybrid concatenates the raw and split streams. Throws
// MissingTableError when a split-dependent strategy lacks a table.
std::vector<Token> build_vocab_corpus(const std::vector<Token>& tokens,
                                      const PipelineConfig& config);

// Sub-word units (marked) for one model-input token under the configured
// strategy. Decoding the result always reproduces token.text.
std::vector<std::string> process_input_token(const Token& token,
                                             const Vocabulary& vocab,
                                             const PipelineConfig& config);

// Stream for one file's tokens, with unit-to-token back-pointers.
SubwordStream process_file_tokens(const std::vector<Token>& tokens,
                                  const Vocabulary& vocab,
                                  const PipelineConfig& config);

// Unique-token-count contraction from identifier splitting.
struct ShrinkageReport {
    uint64_t unique_before = 0;
    uint64_t unique_after = 0;
    double ratio = 0.0;  // 1 - after/before; negative on tiny corpora
};

ShrinkageReport corpus_shrinkage(const std::vector<Token>& tokens,
                                 const FrequencyTable& table,
                                 const SplitOptions& options = {});

// Stream file: '#' header lines with key/value pairs, one unit per line,
// blank line between files.
struct StreamFile {
    std::map<std::string, std::string> header;
    std::vector<std::vector<std::string>> files;
};

void save_stream_file(std::ostream& os,
                      const std::vector<SubwordStream>& streams,
                      const std::map<std::string, std::string>& header);
StreamFile load_stream_file(std::istream& is);

}  // namespace splitbpe
