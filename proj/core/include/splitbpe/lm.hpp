#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "splitbpe/bpe.hpp"

namespace splitbpe {

// Per-file sequence sentinels.
inline constexpr std::string_view kSequenceStart = "<s>";
inline constexpr std::string_view kSequenceEnd = "</s>";

// Conditional distribution over a closed sub-word inventory. For every
// context the probabilities over all units sum to 1 and each unit receives
// probability > 0. Completion and metrics depend only on this interface, so
// a neural model can replace the n-gram default without touching them.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    // Closed inventory, sorted ascending; includes "<s>", "</s>", "<unk>".
    virtual const std::vector<std::string>& unit_vocabulary() const = 0;

    // Markov window: only the trailing order-1 context units matter.
    virtual size_t order() const = 0;

    // p(next | context). Unknown units map to "<unk>".
    virtual double prob(std::span<const std::string> context,
                        std::string_view next) const = 0;

    // The k most probable units, ties broken lexicographically; consistent
    // with prob.
    virtual std::vector<std::pair<std::string, double>> top_candidates(
        std::span<const std::string> context, size_t k) const = 0;
};

struct NGramOptions {
    size_t order = 5;
    double discount = 0.75;  // absolute discount, in (0,1)
};

// Interpolated n-gram model with absolute discounting down to a uniform
// floor. Deterministic to train and immutable afterwards.
class NGramModel final : public LanguageModel {
public:
    static NGramModel train(const std::vector<SubwordStream>& streams,
                            const NGramOptions& options = {});
    static NGramModel train_units(const std::vector<std::vector<std::string>>& files,
                                  const NGramOptions& options = {});

    const std::vector<std::string>& unit_vocabulary() const override;
    size_t order() const override { return order_; }
    double discount() const { return discount_; }
    double prob(std::span<const std::string> context,
                std::string_view next) const override;
    std::vector<std::pair<std::string, double>> top_candidates(
        std::span<const std::string> context, size_t k) const override;

    // Pipeline configuration recorded at training time (stream header echo).
    const std::map<std::string, std::string>& metadata() const { return metadata_; }
    void set_metadata(std::map<std::string, std::string> metadata);

    void save(std::ostream& os) const;
    static NGramModel load(std::istream& is);
    void save_file(const std::filesystem::path& path) const;
    static NGramModel load_file(const std::filesystem::path& path);

private:
    NGramModel() = default;

    using UnitId = uint32_t;
    // Packed id sequence; lexicographic string order == id-tuple order.
    using GramKey = std::string;

    static GramKey make_key(const UnitId* ids, size_t count);

    UnitId intern(const std::string& unit);
    UnitId lookup(std::string_view unit) const;  // unknown -> <unk>
    void count_file(const std::vector<std::string>& units);
    void finalize();

    struct ContextStats {
        uint64_t total = 0;  // continuation tokens after this context
        uint64_t types = 0;  // distinct continuation types
    };

    // Probability given a context already mapped to ids and truncated.
    double prob_ids(std::span<const UnitId> context, UnitId next) const;

    size_t order_ = 5;
    double discount_ = 0.75;
    std::vector<std::string> unit_text_;
    std::unordered_map<std::string, UnitId> unit_ids_;
    UnitId start_id_ = 0;
    UnitId end_id_ = 0;
    // gram_counts_[k-1]: counts of k-grams, k = 1..order.
    std::vector<std::unordered_map<GramKey, uint64_t>> gram_counts_;
    // context_stats_[k]: aggregates for contexts of length k, k = 0..order-1.
    std::vector<std::unordered_map<GramKey, ContextStats>> context_stats_;

    // Derived caches: smoothed unigram distribution by unit id, and the
    // observed continuations (unit, count) per context, both feeding the
    // dense distribution used by top_candidates.
    std::vector<std::string> sorted_vocab_;
    std::vector<double> unigram_;
    std::vector<std::unordered_map<GramKey, std::vector<std::pair<UnitId, uint64_t>>>>
        context_continuations_;

    std::map<std::string, std::string> metadata_;
};

}  // namespace splitbpe
