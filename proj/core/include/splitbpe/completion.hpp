#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitbpe/lm.hpp"

namespace splitbpe {

// A decoded complete-token candidate. Result lists hold distinct texts
// sorted by log_prob descending (ties by text).
struct CompletionCandidate {
    std::string token_text;
    double log_prob = 0.0;
};

struct CompletionOptions {
    size_t k = 10;         // candidates returned; 10 serves R@10
    size_t width = 16;     // beam width
    size_t max_units = 8;  // longest sub-word expansion considered
};

// Beam search over sub-word expansions. Hypotheses grow unit by unit; a
// hypothesis whose last unit lacks the continuation marker is complete and
// moves to the result pool (duplicate decodings keep the higher score).
// Search stops once the pool's k-th score strictly dominates every live
// hypothesis, or when all hypotheses exceed max_units.
std::vector<CompletionCandidate> complete(const LanguageModel& model,
                                          std::span<const std::string> context,
                                          const CompletionOptions& options = {});

// 1-based rank of the first candidate matching `truth`; nullopt if absent.
std::optional<size_t> rank_of_truth(
    const std::vector<CompletionCandidate>& candidates, std::string_view truth);

}  // namespace splitbpe
