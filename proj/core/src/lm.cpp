#include "splitbpe/lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "splitbpe/errors.hpp"
#include "splitbpe/version.hpp"

namespace splitbpe {

namespace {

// Probability updates are written as `p *= lambda; p += f;` everywhere so the
// scalar and vectorized paths produce bitwise-identical results.
void interpolate(double& p, double f, double lambda) {
    p *= lambda;
    p += f;
}

}  // namespace

NGramModel::GramKey NGramModel::make_key(const UnitId* ids, size_t count) {
    GramKey key(count * 4, '\0');
    for (size_t i = 0; i < count; ++i) {
        UnitId id = ids[i];
        key[i * 4 + 0] = static_cast<char>(id >> 24);
        key[i * 4 + 1] = static_cast<char>((id >> 16) & 0xff);
        key[i * 4 + 2] = static_cast<char>((id >> 8) & 0xff);
        key[i * 4 + 3] = static_cast<char>(id & 0xff);
    }
    return key;
}

NGramModel::UnitId NGramModel::intern(const std::string& unit) {
    auto [it, inserted] = unit_ids_.emplace(unit, unit_text_.size());
    if (inserted) unit_text_.push_back(unit);
    return it->second;
}

NGramModel::UnitId NGramModel::lookup(std::string_view unit) const {
    auto it = unit_ids_.find(std::string(unit));
    if (it != unit_ids_.end()) return it->second;
    return unit_ids_.at(std::string(kUnknownUnit));
}

void NGramModel::count_file(const std::vector<std::string>& units) {
    std::vector<UnitId> seq;
    seq.reserve(units.size() + 2);
    seq.push_back(start_id_);
    for (const std::string& unit : units) seq.push_back(intern(unit));
    seq.push_back(end_id_);

    // <s> is a context, never an event, so event positions start at 1.
    for (size_t i = 1; i < seq.size(); ++i) {
        for (size_t k = 1; k <= order_ && k <= i + 1; ++k) {
            ++gram_counts_[k - 1][make_key(&seq[i - k + 1], k)];
        }
    }
}

void NGramModel::finalize() {
    context_stats_.assign(order_, {});
    context_continuations_.assign(order_, {});
    for (size_t k = 1; k <= order_; ++k) {
        for (const auto& [key, count] : gram_counts_[k - 1]) {
            GramKey ctx = key.substr(0, key.size() - 4);
            ContextStats& stats = context_stats_[k - 1][ctx];
            stats.total += count;
            stats.types += 1;
            if (k >= 2) {
                UnitId last = (static_cast<UnitId>(static_cast<unsigned char>(key[key.size() - 4])) << 24) |
                              (static_cast<UnitId>(static_cast<unsigned char>(key[key.size() - 3])) << 16) |
                              (static_cast<UnitId>(static_cast<unsigned char>(key[key.size() - 2])) << 8) |
                              static_cast<UnitId>(static_cast<unsigned char>(key[key.size() - 1]));
                context_continuations_[k - 1][ctx].emplace_back(last, count);
            }
        }
    }

    sorted_vocab_ = unit_text_;
    std::sort(sorted_vocab_.begin(), sorted_vocab_.end());

    const size_t v = unit_text_.size();
    unigram_.assign(v, 1.0 / static_cast<double>(v));
    const ContextStats& root = context_stats_[0][GramKey()];
    if (root.total > 0) {
        const double total = static_cast<double>(root.total);
        const double lambda = discount_ * static_cast<double>(root.types) / total;
        for (double& p : unigram_) p *= lambda;
        for (const auto& [key, count] : gram_counts_[0]) {
            UnitId id = (static_cast<UnitId>(static_cast<unsigned char>(key[0])) << 24) |
                        (static_cast<UnitId>(static_cast<unsigned char>(key[1])) << 16) |
                        (static_cast<UnitId>(static_cast<unsigned char>(key[2])) << 8) |
                        static_cast<UnitId>(static_cast<unsigned char>(key[3]));
            unigram_[id] += (static_cast<double>(count) - discount_) / total;
        }
    }
}

NGramModel NGramModel::train_units(const std::vector<std::vector<std::string>>& files,
                                   const NGramOptions& options) {
    if (options.order < 1) throw ConfigError("n-gram order must be >= 1");
    if (!(options.discount > 0.0 && options.discount < 1.0)) {
        throw ConfigError("n-gram discount must lie in (0, 1)");
    }
    NGramModel model;
    model.order_ = options.order;
    model.discount_ = options.discount;
    model.gram_counts_.assign(options.order, {});
    model.start_id_ = model.intern(std::string(kSequenceStart));
    model.end_id_ = model.intern(std::string(kSequenceEnd));
    model.intern(std::string(kUnknownUnit));

    bool any = false;
    for (const auto& units : files) {
        if (units.empty()) continue;
        model.count_file(units);
        any = true;
    }
    if (!any) throw EmptyCorpusError("LM training requires a non-empty stream");
    model.finalize();
    return model;
}

NGramModel NGramModel::train(const std::vector<SubwordStream>& streams,
                             const NGramOptions& options) {
    std::vector<std::vector<std::string>> files;
    files.reserve(streams.size());
    for (const SubwordStream& stream : streams) files.push_back(stream.units);
    return train_units(files, options);
}

const std::vector<std::string>& NGramModel::unit_vocabulary() const {
    return sorted_vocab_;
}

double NGramModel::prob_ids(std::span<const UnitId> context, UnitId next) const {
    double p = 1.0 / static_cast<double>(unit_text_.size());
    for (size_t len = 0; len <= context.size(); ++len) {
        GramKey ctx_key = make_key(context.data() + (context.size() - len), len);
        auto stats_it = context_stats_[len].find(ctx_key);
        if (stats_it == context_stats_[len].end() || stats_it->second.total == 0) {
            continue;
        }
        const double total = static_cast<double>(stats_it->second.total);
        const double lambda =
            discount_ * static_cast<double>(stats_it->second.types) / total;
        UnitId gram[1] = {next};
        GramKey gram_key = ctx_key + make_key(gram, 1);
        auto count_it = gram_counts_[len].find(gram_key);
        double f = 0.0;
        if (count_it != gram_counts_[len].end()) {
            f = (static_cast<double>(count_it->second) - discount_) / total;
        }
        interpolate(p, f, lambda);
    }
    return p;
}

double NGramModel::prob(std::span<const std::string> context,
                        std::string_view next) const {
    const size_t window = std::min(context.size(), order_ - 1);
    std::vector<UnitId> ids(window);
    for (size_t i = 0; i < window; ++i) {
        ids[i] = lookup(context[context.size() - window + i]);
    }
    return prob_ids(ids, lookup(next));
}

std::vector<std::pair<std::string, double>> NGramModel::top_candidates(
    std::span<const std::string> context, size_t k) const {
    const size_t v = unit_text_.size();
    k = std::min(k, v);
    if (k == 0) return {};

    const size_t window = std::min(context.size(), order_ - 1);
    std::vector<UnitId> ids(window);
    for (size_t i = 0; i < window; ++i) {
        ids[i] = lookup(context[context.size() - window + i]);
    }

    // Dense distribution, built level by level with the same arithmetic as
    // prob() so reported values match it bitwise.
    std::vector<double> p = unigram_;
    for (size_t len = 1; len <= window; ++len) {
        GramKey ctx_key = make_key(ids.data() + (window - len), len);
        auto stats_it = context_stats_[len].find(ctx_key);
        if (stats_it == context_stats_[len].end() || stats_it->second.total == 0) {
            continue;
        }
        const double total = static_cast<double>(stats_it->second.total);
        const double lambda =
            discount_ * static_cast<double>(stats_it->second.types) / total;
        for (double& x : p) x *= lambda;
        auto cont_it = context_continuations_[len].find(ctx_key);
        if (cont_it != context_continuations_[len].end()) {
            for (const auto& [unit, count] : cont_it->second) {
                p[unit] += (static_cast<double>(count) - discount_) / total;
            }
        }
    }

    std::vector<UnitId> index(v);
    for (UnitId i = 0; i < v; ++i) index[i] = i;
    auto better = [&](UnitId a, UnitId b) {
        if (p[a] != p[b]) return p[a] > p[b];
        return unit_text_[a] < unit_text_[b];
    };
    std::partial_sort(index.begin(), index.begin() + static_cast<ptrdiff_t>(k),
                      index.end(), better);

    std::vector<std::pair<std::string, double>> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        out.emplace_back(unit_text_[index[i]], p[index[i]]);
    }
    return out;
}

void NGramModel::set_metadata(std::map<std::string, std::string> metadata) {
    metadata_ = std::move(metadata);
}

void NGramModel::save(std::ostream& os) const {
    std::ostringstream discount;
    discount << std::setprecision(17) << discount_;
    os << kNgramFormat << " " << order_ << " " << discount.str() << "\n";
    for (const auto& [key, value] : metadata_) {
        os << "# " << key << " " << value << "\n";
    }
    os << "units " << unit_text_.size() << "\n";
    for (const std::string& unit : unit_text_) os << unit << "\n";
    for (size_t k = 1; k <= order_; ++k) {
        const auto& counts = gram_counts_[k - 1];
        std::vector<const GramKey*> keys;
        keys.reserve(counts.size());
        for (const auto& [key, count] : counts) keys.push_back(&key);
        std::sort(keys.begin(), keys.end(),
                  [](const GramKey* a, const GramKey* b) { return *a < *b; });
        os << "grams " << k << " " << counts.size() << "\n";
        for (const GramKey* key : keys) {
            for (size_t i = 0; i < key->size(); i += 4) {
                UnitId id = (static_cast<UnitId>(static_cast<unsigned char>((*key)[i])) << 24) |
                            (static_cast<UnitId>(static_cast<unsigned char>((*key)[i + 1])) << 16) |
                            (static_cast<UnitId>(static_cast<unsigned char>((*key)[i + 2])) << 8) |
                            static_cast<UnitId>(static_cast<unsigned char>((*key)[i + 3]));
                os << id << " ";
            }
            os << counts.at(*key) << "\n";
        }
    }
    os << "end\n";
}

NGramModel NGramModel::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("n-gram model: empty file");
    std::istringstream header(line);
    std::string tag, version;
    size_t order = 0;
    double discount = 0.0;
    header >> tag >> version >> order >> discount;
    if (tag + " " + version != kNgramFormat || !header) {
        throw FormatError("n-gram model: missing or unknown header");
    }

    NGramModel model;
    model.order_ = order;
    model.discount_ = discount;
    model.gram_counts_.assign(order, {});

    while (std::getline(is, line) && !line.empty() && line[0] == '#') {
        std::istringstream comment(line.substr(1));
        std::string key;
        comment >> key;
        std::string value;
        std::getline(comment, value);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);
        if (!key.empty()) model.metadata_[key] = value;
    }

    std::istringstream units_line(line);
    std::string word;
    size_t unit_count = 0;
    units_line >> word >> unit_count;
    if (word != "units") throw FormatError("n-gram model: expected units section");
    for (size_t i = 0; i < unit_count; ++i) {
        if (!std::getline(is, line)) {
            throw FormatError("n-gram model: truncated units section");
        }
        model.intern(line);
    }
    model.start_id_ = model.intern(std::string(kSequenceStart));
    model.end_id_ = model.intern(std::string(kSequenceEnd));
    model.intern(std::string(kUnknownUnit));

    while (std::getline(is, line) && line != "end") {
        std::istringstream section(line);
        std::string label;
        size_t k = 0, entries = 0;
        section >> label >> k >> entries;
        if (label != "grams" || k == 0 || k > order) {
            throw FormatError("n-gram model: bad section: " + line);
        }
        for (size_t i = 0; i < entries; ++i) {
            if (!std::getline(is, line)) {
                throw FormatError("n-gram model: truncated grams section");
            }
            std::istringstream row(line);
            std::vector<UnitId> ids(k);
            for (size_t j = 0; j < k; ++j) row >> ids[j];
            uint64_t count = 0;
            row >> count;
            if (!row) throw FormatError("n-gram model: bad gram row: " + line);
            model.gram_counts_[k - 1][make_key(ids.data(), k)] = count;
        }
    }
    model.finalize();
    return model;
}

void NGramModel::save_file(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path.string());
    save(os);
}

NGramModel NGramModel::load_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path.string());
    return load(is);
}

}  // namespace splitbpe
