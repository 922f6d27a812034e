#include "splitbpe/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "splitbpe/errors.hpp"
#include "splitbpe/hashing.hpp"
#include "splitbpe/version.hpp"

namespace splitbpe {

namespace {

uint64_t pack_pair(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(a) << 32) | b;
}

std::string pair_key(std::string_view left, std::string_view right) {
    std::string key;
    key.reserve(left.size() + right.size() + 1);
    key.append(left);
    key.push_back(' ');
    key.append(right);
    return key;
}

// Working state for vocabulary training: token types interned to unit-id
// sequences, with incrementally maintained pair statistics.
class Trainer {
public:
    Trainer(const std::vector<Token>& tokens, const TrainOptions& options)
        : options_(options) {
        std::map<std::string, uint64_t> type_freq;
        for (const Token& token : tokens) {
            if (!token.text.empty()) ++type_freq[token.text];
        }
        if (type_freq.empty()) {
            throw EmptyCorpusError("BPE training requires a non-empty token stream");
        }
        for (auto& [text, freq] : type_freq) {
            std::vector<uint32_t> seq;
            if (is_reserved_text(text)) {
                seq.push_back(intern(text));  // placeholders stay atomic
            } else {
                for (char c : text) {
                    uint32_t id = intern(std::string(1, c));
                    seq.push_back(id);
                    single_chars_.insert(unit_text_[id]);
                }
            }
            types_.push_back(TokenType{std::move(seq), freq});
        }
        for (size_t t = 0; t < types_.size(); ++t) {
            add_contributions(t);
        }
    }

    std::vector<MergeRule> run(size_t size_limit) {
        std::vector<MergeRule> merges;
        while (merges.size() < size_limit) {
            auto best = select_best_pair();
            if (!best) break;
            auto [left_id, right_id] = *best;
            MergeRule rule{unit_text_[left_id], unit_text_[right_id]};
            uint32_t merged_id = intern(rule.merged());
            apply_merge(left_id, right_id, merged_id);
            merges.push_back(std::move(rule));
        }
        return merges;
    }

    std::vector<std::string> training_chars() const {
        return {single_chars_.begin(), single_chars_.end()};
    }

private:
    struct TokenType {
        std::vector<uint32_t> seq;
        uint64_t freq;
    };

    uint32_t intern(const std::string& unit) {
        auto [it, inserted] = unit_ids_.emplace(unit, unit_text_.size());
        if (inserted) unit_text_.push_back(unit);
        return it->second;
    }

    void add_contributions(size_t t) {
        const TokenType& type = types_[t];
        for (size_t j = 1; j < type.seq.size(); ++j) {
            uint64_t key = pack_pair(type.seq[j - 1], type.seq[j]);
            pair_counts_[key] += type.freq;
            pair_locs_[key].push_back(static_cast<uint32_t>(t));
        }
    }

    void remove_contributions(size_t t) {
        const TokenType& type = types_[t];
        for (size_t j = 1; j < type.seq.size(); ++j) {
            uint64_t key = pack_pair(type.seq[j - 1], type.seq[j]);
            auto it = pair_counts_.find(key);
            if (it != pair_counts_.end() && (it->second -= type.freq) == 0) {
                pair_counts_.erase(it);
            }
        }
    }

    // Most frequent pair; ties fall to the lexicographically least
    // (left, right) so training is deterministic.
    std::optional<std::pair<uint32_t, uint32_t>> select_best_pair() const {
        uint64_t best_count = 0;
        uint64_t best_key = 0;
        for (const auto& [key, count] : pair_counts_) {
            if (count < options_.min_pair_count || count < best_count) continue;
            if (count > best_count) {
                best_count = count;
                best_key = key;
                continue;
            }
            auto lex = [&](uint64_t k) {
                return std::make_pair(
                    std::string_view(unit_text_[static_cast<uint32_t>(k >> 32)]),
                    std::string_view(unit_text_[static_cast<uint32_t>(k)]));
            };
            if (lex(key) < lex(best_key)) best_key = key;
        }
        if (best_count == 0) return std::nullopt;
        return std::make_pair(static_cast<uint32_t>(best_key >> 32),
                              static_cast<uint32_t>(best_key));
    }

    void apply_merge(uint32_t left, uint32_t right, uint32_t merged) {
        uint64_t key = pack_pair(left, right);
        auto locs_it = pair_locs_.find(key);
        if (locs_it == pair_locs_.end()) return;
        std::vector<uint32_t> affected = std::move(locs_it->second);
        pair_locs_.erase(locs_it);
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()),
                       affected.end());

        for (uint32_t t : affected) {
            std::vector<uint32_t>& seq = types_[t].seq;
            bool contains = false;
            for (size_t j = 0; j + 1 < seq.size(); ++j) {
                if (seq[j] == left && seq[j + 1] == right) {
                    contains = true;
                    break;
                }
            }
            if (!contains) continue;  // stale location entry

            remove_contributions(t);
            std::vector<uint32_t> rewritten;
            rewritten.reserve(seq.size());
            for (size_t j = 0; j < seq.size();) {
                if (j + 1 < seq.size() && seq[j] == left && seq[j + 1] == right) {
                    rewritten.push_back(merged);
                    j += 2;
                } else {
                    rewritten.push_back(seq[j]);
                    ++j;
                }
            }
            seq = std::move(rewritten);
            add_contributions(t);
        }
    }

    TrainOptions options_;
    std::unordered_map<std::string, uint32_t> unit_ids_;
    std::vector<std::string> unit_text_;
    std::vector<TokenType> types_;
    std::unordered_map<uint64_t, uint64_t> pair_counts_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> pair_locs_;
    std::set<std::string> single_chars_;
};

}  // namespace

Vocabulary::Vocabulary() {
    units_.emplace(kStringPlaceholder);
    units_.emplace(kNumberPlaceholder);
    units_.emplace(kUnknownUnit);
}

void Vocabulary::index_merges() {
    for (size_t i = 0; i < merges_.size(); ++i) {
        const MergeRule& rule = merges_[i];
        units_.insert(rule.left);
        units_.insert(rule.right);
        units_.insert(rule.merged());
        ranks_.emplace(pair_key(rule.left, rule.right), static_cast<int>(i));
    }
    for (const std::string& c : training_chars_) units_.insert(c);
}

Vocabulary Vocabulary::from_merges(std::vector<MergeRule> merges,
                                   const std::vector<std::string>& single_units) {
    Vocabulary vocab;
    vocab.merges_ = std::move(merges);
    vocab.training_chars_ = single_units;
    std::sort(vocab.training_chars_.begin(), vocab.training_chars_.end());
    vocab.training_chars_.erase(std::unique(vocab.training_chars_.begin(),
                                            vocab.training_chars_.end()),
                                vocab.training_chars_.end());
    vocab.index_merges();
    return vocab;
}

int Vocabulary::merge_rank(const std::string& left, const std::string& right) const {
    auto it = ranks_.find(pair_key(left, right));
    return it == ranks_.end() ? -1 : it->second;
}

std::vector<std::string> Vocabulary::sorted_units() const {
    std::vector<std::string> out(units_.begin(), units_.end());
    std::sort(out.begin(), out.end());
    return out;
}

void Vocabulary::save(std::ostream& os,
                      const std::map<std::string, std::string>& provenance) const {
    os << kVocabFormat << " " << merges_.size() << "\n";
    if (!training_chars_.empty()) {
        os << "# chars";
        for (const std::string& c : training_chars_) os << " " << c;
        os << "\n";
    }
    for (const auto& [key, value] : provenance) {
        os << "# " << key << " " << value << "\n";
    }
    for (const MergeRule& rule : merges_) {
        os << rule.left << " " << rule.right << "\n";
    }
}

Vocabulary Vocabulary::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("vocabulary: empty file");
    std::string expected = std::string(kVocabFormat) + " ";
    if (!line.starts_with(expected)) {
        throw FormatError("vocabulary: missing or unknown header");
    }
    size_t declared = std::stoull(line.substr(expected.size()));

    std::vector<MergeRule> merges;
    std::vector<std::string> chars;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream comment(line.substr(1));
            std::string key;
            comment >> key;
            if (key == "chars") {
                std::string c;
                while (comment >> c) chars.push_back(c);
            }
            continue;
        }
        size_t space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 == line.size()) {
            throw FormatError("vocabulary: expected 'left right', got: " + line);
        }
        merges.push_back(MergeRule{line.substr(0, space), line.substr(space + 1)});
    }
    if (merges.size() != declared) {
        throw FormatError("vocabulary: header declares " + std::to_string(declared) +
                          " merges, file holds " + std::to_string(merges.size()));
    }
    return from_merges(std::move(merges), chars);
}

void Vocabulary::save_file(const std::filesystem::path& path,
                           const std::map<std::string, std::string>& provenance) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path.string());
    save(os, provenance);
}

Vocabulary Vocabulary::load_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path.string());
    return load(is);
}

uint64_t Vocabulary::content_hash() const {
    std::ostringstream os;
    save(os);
    return fnv1a64(os.str());
}

Vocabulary train(const std::vector<Token>& tokens, size_t size_limit,
                 const TrainOptions& options) {
    Trainer trainer(tokens, options);
    Vocabulary vocab;
    vocab.merges_ = trainer.run(size_limit);
    vocab.training_chars_ = trainer.training_chars();
    vocab.index_merges();
    return vocab;
}

std::vector<std::string> encode_units(std::string_view token_text,
                                      const Vocabulary& vocab,
                                      const EncodeOptions& options) {
    if (is_reserved_text(token_text)) {
        return {std::string(token_text)};
    }
    std::vector<std::string> seq;
    seq.reserve(token_text.size());
    for (char c : token_text) {
        std::string unit(1, c);
        if (!vocab.has_unit(unit) && options.substitute_unknown) {
            unit = kUnknownUnit;
        }
        seq.push_back(std::move(unit));
    }

    // Repeatedly apply the applicable merge with the highest priority; this
    // reproduces replaying the full merge list in vocabulary order.
    while (seq.size() > 1) {
        int best_rank = std::numeric_limits<int>::max();
        for (size_t j = 0; j + 1 < seq.size(); ++j) {
            int rank = vocab.merge_rank(seq[j], seq[j + 1]);
            if (rank >= 0 && rank < best_rank) best_rank = rank;
        }
        if (best_rank == std::numeric_limits<int>::max()) break;

        const MergeRule& rule = vocab.merges()[best_rank];
        std::vector<std::string> rewritten;
        rewritten.reserve(seq.size());
        for (size_t j = 0; j < seq.size();) {
            if (j + 1 < seq.size() && seq[j] == rule.left &&
                seq[j + 1] == rule.right) {
                rewritten.push_back(rule.merged());
                j += 2;
            } else {
                rewritten.push_back(std::move(seq[j]));
                ++j;
            }
        }
        seq = std::move(rewritten);
    }
    return seq;
}

std::vector<std::string> encode(std::string_view token_text,
                                const Vocabulary& vocab,
                                const EncodeOptions& options) {
    std::vector<std::string> units = encode_units(token_text, vocab, options);
    for (size_t i = 0; i + 1 < units.size(); ++i) {
        units[i].append(kContinuationMarker);
    }
    return units;
}

std::string decode(const std::vector<std::string>& units) {
    std::string out;
    for (size_t i = 0; i < units.size(); ++i) {
        const std::string& unit = units[i];
        if (unit.ends_with(kContinuationMarker)) {
            if (i + 1 == units.size()) {
                throw MalformedStreamError(
                    "final unit carries the continuation marker: " + unit);
            }
            out.append(unit, 0, unit.size() - kContinuationMarker.size());
        } else {
            out.append(unit);
        }
    }
    return out;
}

bool is_single_unit(std::string_view token_text, const Vocabulary& vocab) {
    std::vector<std::string> units = encode_units(token_text, vocab);
    return units.size() == 1 && units[0] == token_text;
}

std::string SubwordStream::token_text(size_t span_index) const {
    const TokenSpan& span = token_spans.at(span_index);
    return decode({units.begin() + static_cast<ptrdiff_t>(span.start),
                   units.begin() + static_cast<ptrdiff_t>(span.start + span.count)});
}

}  // namespace splitbpe
