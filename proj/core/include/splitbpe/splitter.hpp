#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace splitbpe {

// Decomposition of one identifier. `pieces` is an exact contiguous cover of
// the identifier (underscore separators are standalone pieces); `words` holds
// the lowercased non-separator pieces.
struct SplitResult {
    std::vector<std::string> pieces;
    std::vector<std::string> words;
};

struct SplitOptions {
    bool split_letter_digit = true;       // "utf8" -> "utf","8"
    double unknown_char_penalty = -4.0;   // per character of an unknown part
    // Score the unsplit form must be beaten by; defaults to ln(min_count).
    std::optional<double> unsplit_bonus;
};

// Corpus-derived table of frequent sub-words. Words below min_count behave
// as absent. Immutable after construction.
class FrequencyTable {
public:
    FrequencyTable() = default;
    FrequencyTable(std::map<std::string, uint64_t> counts, uint64_t min_count);

    uint64_t count(const std::string& word) const;
    bool contains(const std::string& word) const { return count(word) > 0; }
    uint64_t min_count() const { return min_count_; }
    bool empty() const { return counts_.empty(); }
    size_t size() const { return counts_.size(); }
    // SIZE_MAX when the table is empty.
    size_t shortest_word_length() const { return shortest_; }
    const std::map<std::string, uint64_t>& counts() const { return counts_; }

    void save(std::ostream& os,
              const std::map<std::string, std::string>& provenance = {}) const;
    static FrequencyTable load(std::istream& is);
    void save_file(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& provenance = {}) const;
    static FrequencyTable load_file(const std::filesystem::path& path);

private:
    std::map<std::string, uint64_t> counts_;
    uint64_t min_count_ = 1;
    size_t shortest_ = SIZE_MAX;
};

// Splits at underscores, lower-to-upper transitions, letter/digit boundaries,
// and before the last upper of an upper run followed by lower ("XMLParser" ->
// "XML","Parser").
SplitResult split_convention(std::string_view identifier,
                             const SplitOptions& options = {});

// Aggregates convention-split words over a corpus, pruning rare ones.
FrequencyTable build_frequency_table(const std::vector<std::string>& identifiers,
                                     uint64_t min_count,
                                     const SplitOptions& options = {});

// Segments a single-case word by dynamic programming over table scores:
// known parts score ln(count), unknown parts score a per-character penalty.
// Returns {word} unless some multi-part segmentation strictly beats the
// unsplit baseline. Ties prefer fewer parts, then a longer earlier part.
std::vector<std::string> split_same_case(std::string_view word,
                                         const FrequencyTable& table,
                                         const SplitOptions& options = {});

// Convention split followed by same-case segmentation of pieces long enough
// to hold two table words. Lookup is case-insensitive; output preserves case.
SplitResult split(std::string_view identifier, const FrequencyTable& table,
                  const SplitOptions& options = {});

}  // namespace splitbpe
