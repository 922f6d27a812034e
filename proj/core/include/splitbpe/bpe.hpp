#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "splitbpe/token.hpp"

namespace splitbpe {

// Suffix attached to every non-final sub-word unit of a token. Its absence
// marks token completion during decoding and beam search.
inline constexpr std::string_view kContinuationMarker = "@@";

struct MergeRule {
    std::string left;
    std::string right;

    std::string merged() const { return left + right; }
    bool operator==(const MergeRule&) const = default;
};

// An ordered list of BPE merge operations plus the unit inventory they
// generate. Merge order is the tokenization priority. Immutable once built.
class Vocabulary {
public:
    Vocabulary();

    // Builds a vocabulary from an explicit merge list (e.g. a vocabulary
    // file). `single_units` lists characters that are units despite never
    // participating in a merge.
    static Vocabulary from_merges(std::vector<MergeRule> merges,
                                  const std::vector<std::string>& single_units = {});

    const std::vector<MergeRule>& merges() const { return merges_; }
    size_t merge_count() const { return merges_.size(); }
    bool has_unit(const std::string& unit) const { return units_.contains(unit); }
    // Rank of a merge pair in priority order; -1 when the pair never merges.
    int merge_rank(const std::string& left, const std::string& right) const;
    // All units, sorted; includes single characters and reserved units.
    std::vector<std::string> sorted_units() const;

    void save(std::ostream& os,
              const std::map<std::string, std::string>& provenance = {}) const;
    static Vocabulary load(std::istream& is);
    void save_file(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& provenance = {}) const;
    static Vocabulary load_file(const std::filesystem::path& path);

    // Hash over the serialized merge list; used for artifact provenance.
    uint64_t content_hash() const;

private:
    friend Vocabulary train(const std::vector<Token>&, size_t,
                            const struct TrainOptions&);

    void index_merges();

    std::vector<MergeRule> merges_;
    std::unordered_set<std::string> units_;
    std::unordered_map<std::string, int> ranks_;  // "left right" -> priority
    std::vector<std::string> training_chars_;     // chars seen only at training
};

struct TrainOptions {
    // Pairs occurring fewer than this many times are never merged.
    uint64_t min_pair_count = 2;
};

// Builds a vocabulary over the token stream: every token starts as its
// character sequence and the globally most frequent adjacent pair (within
// token boundaries) is merged until `size_limit` merges are recorded or no
// pair reaches the frequency floor. Ties break lexicographically on
// (left, right). Throws EmptyCorpusError on an empty stream.
Vocabulary train(const std::vector<Token>& tokens, size_t size_limit,
                 const TrainOptions& options = {});

struct EncodeOptions {
    // Replace characters absent from the unit inventory with "<unk>". Turned
    // off, unknown characters pass through as single-character units.
    bool substitute_unknown = true;
};

// Segments a token by replaying merges in vocabulary order. Units are
// returned with the continuation marker on every non-final unit.
std::vector<std::string> encode(std::string_view token_text,
                                const Vocabulary& vocab,
                                const EncodeOptions& options = {});

// As encode, but without continuation markers.
std::vector<std::string> encode_units(std::string_view token_text,
                                      const Vocabulary& vocab,
                                      const EncodeOptions& options = {});

// Inverse of encode: strips one marker suffix from each non-final unit and
// concatenates. Throws MalformedStreamError if the final unit carries the
// marker.
std::string decode(const std::vector<std::string>& units);

// True iff the token encodes to exactly one unit equal to its own text.
bool is_single_unit(std::string_view token_text, const Vocabulary& vocab);

// The sub-word unit sequence for a run of tokens (one source file), with
// back-pointers from units to the originating tokens.
struct TokenSpan {
    size_t start = 0;   // index of the token's first unit
    size_t count = 0;   // number of units
    TokenKind kind = TokenKind::Punctuation;
};

struct SubwordStream {
    std::vector<std::string> units;
    std::vector<TokenSpan> token_spans;

    // Original token text, recovered through the marker round-trip.
    std::string token_text(size_t span_index) const;
};

}  // namespace splitbpe
