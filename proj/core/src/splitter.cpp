#include "splitbpe/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "splitbpe/errors.hpp"
#include "splitbpe/version.hpp"

namespace splitbpe {

namespace {

bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_letter(unsigned char c) { return is_lower(c) || is_upper(c); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return out;
}

// Boundary test between s[i-1] and s[i].
bool convention_boundary(std::string_view s, size_t i, const SplitOptions& options) {
    unsigned char a = s[i - 1];
    unsigned char b = s[i];
    if (a == '_' || b == '_') return true;
    if (is_lower(a) && is_upper(b)) return true;
    if (options.split_letter_digit &&
        ((is_letter(a) && is_digit(b)) || (is_digit(a) && is_letter(b)))) {
        return true;
    }
    // Acronym rule: the last upper of an upper run starts the next word.
    if (i + 1 < s.size() && is_upper(a) && is_upper(b) && is_lower(s[i + 1])) {
        return true;
    }
    return false;
}

}  // namespace

FrequencyTable::FrequencyTable(std::map<std::string, uint64_t> counts,
                               uint64_t min_count)
    : min_count_(min_count == 0 ? 1 : min_count) {
    for (auto& [word, n] : counts) {
        if (n >= min_count_ && !word.empty()) {
            shortest_ = std::min(shortest_, word.size());
            counts_.emplace(word, n);
        }
    }
}

uint64_t FrequencyTable::count(const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
}

void FrequencyTable::save(std::ostream& os,
                          const std::map<std::string, std::string>& provenance) const {
    os << kFreqTableFormat << "\n";
    os << "# min-count " << min_count_ << "\n";
    for (const auto& [key, value] : provenance) {
        os << "# " << key << " " << value << "\n";
    }
    for (const auto& [word, n] : counts_) {
        os << word << "\t" << n << "\n";
    }
}

FrequencyTable FrequencyTable::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kFreqTableFormat) {
        throw FormatError("frequency table: missing or unknown header");
    }
    uint64_t min_count = 1;
    std::map<std::string, uint64_t> counts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream comment(line.substr(1));
            std::string key;
            comment >> key;
            if (key == "min-count") comment >> min_count;
            continue;
        }
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw FormatError("frequency table: expected word<TAB>count, got: " + line);
        }
        counts[line.substr(0, tab)] = std::stoull(line.substr(tab + 1));
    }
    return FrequencyTable(std::move(counts), min_count);
}

void FrequencyTable::save_file(const std::filesystem::path& path,
                               const std::map<std::string, std::string>& provenance) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path.string());
    save(os, provenance);
}

FrequencyTable FrequencyTable::load_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path.string());
    return load(is);
}

SplitResult split_convention(std::string_view identifier,
                             const SplitOptions& options) {
    SplitResult result;
    if (identifier.empty()) return result;
    size_t start = 0;
    for (size_t i = 1; i <= identifier.size(); ++i) {
        if (i == identifier.size() || convention_boundary(identifier, i, options)) {
            result.pieces.emplace_back(identifier.substr(start, i - start));
            start = i;
        }
    }
    for (const std::string& piece : result.pieces) {
        if (piece[0] != '_') result.words.push_back(to_lower(piece));
    }
    return result;
}

FrequencyTable build_frequency_table(const std::vector<std::string>& identifiers,
                                     uint64_t min_count,
                                     const SplitOptions& options) {
    std::map<std::string, uint64_t> counts;
    for (const std::string& identifier : identifiers) {
        for (std::string& word : split_convention(identifier, options).words) {
            ++counts[std::move(word)];
        }
    }
    return FrequencyTable(std::move(counts), min_count);
}

std::vector<std::string> split_same_case(std::string_view word,
                                         const FrequencyTable& table,
                                         const SplitOptions& options) {
    if (word.empty()) return {};
    const size_t n = word.size();
    const std::string lower = to_lower(word);

    auto part_score = [&](size_t begin, size_t end) {
        uint64_t c = table.count(lower.substr(begin, end - begin));
        if (c > 0) return std::log(static_cast<double>(c));
        return options.unknown_char_penalty * static_cast<double>(end - begin);
    };

    // Suffix DP. At each offset prefer higher score, then fewer parts, then a
    // longer first part, which yields the documented deterministic order.
    struct Cell {
        double score = 0.0;
        size_t parts = 0;
        size_t next = 0;
    };
    std::vector<Cell> dp(n + 1);
    dp[n] = Cell{0.0, 0, n};
    for (size_t i = n; i-- > 0;) {
        Cell best{-std::numeric_limits<double>::infinity(), 0, n + 1};
        for (size_t j = i + 1; j <= n; ++j) {
            double score = part_score(i, j) + dp[j].score;
            size_t parts = 1 + dp[j].parts;
            bool better = score > best.score ||
                          (score == best.score &&
                           (parts < best.parts ||
                            (parts == best.parts && j > best.next)));
            if (better) best = Cell{score, parts, j};
        }
        dp[i] = best;
    }

    double baseline = std::max(
        part_score(0, n),
        options.unsplit_bonus.value_or(
            std::log(static_cast<double>(std::max<uint64_t>(table.min_count(), 1)))));
    if (dp[0].parts <= 1 || dp[0].score <= baseline) {
        return {std::string(word)};
    }
    std::vector<std::string> parts;
    for (size_t i = 0; i < n; i = dp[i].next) {
        parts.emplace_back(word.substr(i, dp[i].next - i));
    }
    return parts;
}

SplitResult split(std::string_view identifier, const FrequencyTable& table,
                  const SplitOptions& options) {
    SplitResult conv = split_convention(identifier, options);
    if (table.empty()) return conv;

    // A piece shorter than two table words cannot usefully segment.
    const size_t threshold = 2 * table.shortest_word_length();
    SplitResult result;
    for (const std::string& piece : conv.pieces) {
        if (piece[0] == '_') {
            result.pieces.push_back(piece);
            continue;
        }
        if (piece.size() < threshold) {
            result.pieces.push_back(piece);
            result.words.push_back(to_lower(piece));
            continue;
        }
        for (std::string& part : split_same_case(piece, table, options)) {
            result.words.push_back(to_lower(part));
            result.pieces.push_back(std::move(part));
        }
    }
    return result;
}

}  // namespace splitbpe
