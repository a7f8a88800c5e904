#include "zkit/language_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "zkit/errors.hpp"

namespace zkit {

namespace {

constexpr int kMinOrder = 2;
constexpr int kMaxOrder = 6;
constexpr int kMaxFlatOrder = 5;

// Unknown-run penalties for segmentation, in log10 units. The per-letter
// term keeps any in-vocabulary parse ahead of leaving the span unexplained.
constexpr double kUnknownRunBase = -4.0;
constexpr double kUnknownPerLetter = -2.0;

void check_order(int order) {
    if (order < kMinOrder || order > kMaxOrder)
        throw PreconditionError("n-gram order must be in [" + std::to_string(kMinOrder) + ", " +
                                std::to_string(kMaxOrder) + "], got " + std::to_string(order));
}

uint32_t power26(int k) {
    uint32_t p = 1;
    for (int i = 0; i < k; i++) p *= 26;
    return p;
}

}  // namespace

NGramCounts count_ngrams(std::istream& corpus, int order) {
    check_order(order);
    std::vector<uint32_t> windows;
    std::string line, letters;
    while (std::getline(corpus, line)) {
        letters.clear();
        for (char ch : line)
            if (isalpha((unsigned char)ch)) letters.push_back((char)toupper((unsigned char)ch));
        for (size_t i = 0; i + (size_t)order <= letters.size(); i++) {
            uint32_t packed = 0;
            for (int j = 0; j < order; j++) packed = packed * 26 + (uint32_t)(letters[i + (size_t)j] - 'A');
            windows.push_back(packed);
        }
    }
    if (windows.empty())
        throw PreconditionError("corpus contains no " + std::to_string(order) +
                                "-letter windows after normalization");
    std::sort(windows.begin(), windows.end());
    NGramCounts counts;
    counts.order = order;
    counts.total = windows.size();
    for (size_t i = 0; i < windows.size();) {
        size_t j = i;
        while (j < windows.size() && windows[j] == windows[i]) j++;
        counts.entries.emplace_back(windows[i], (uint64_t)(j - i));
        i = j;
    }
    return counts;
}

uint32_t pack_kgram(const std::string& kgram) {
    uint32_t packed = 0;
    for (char ch : kgram) {
        if (ch < 'A' || ch > 'Z')
            throw FormatError("k-gram must be uppercase letters, got '" + kgram + "'");
        packed = packed * 26 + (uint32_t)(ch - 'A');
    }
    return packed;
}

std::string unpack_kgram(uint32_t packed, int order) {
    std::string out((size_t)order, 'A');
    for (int j = order - 1; j >= 0; j--) {
        out[(size_t)j] = (char)('A' + packed % 26);
        packed /= 26;
    }
    return out;
}

NGramCounts parse_ngram_tsv(std::istream& in) {
    NGramCounts counts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError("n-gram line " + std::to_string(lineno) + " has no tab separator");
        std::string gram = line.substr(0, tab);
        if (counts.order == 0) {
            counts.order = (int)gram.size();
            check_order(counts.order);
        } else if ((int)gram.size() != counts.order) {
            throw FormatError("n-gram line " + std::to_string(lineno) + " has length " +
                              std::to_string(gram.size()) + ", expected " +
                              std::to_string(counts.order));
        }
        std::string count_text = line.substr(tab + 1);
        uint64_t count = 0;
        try {
            size_t used = 0;
            count = std::stoull(count_text, &used);
            if (used != count_text.size() || count_text.empty() ||
                !isdigit((unsigned char)count_text[0]))
                throw std::invalid_argument(count_text);
        } catch (const std::exception&) {
            throw FormatError("bad count on n-gram line " + std::to_string(lineno));
        }
        if (count == 0)
            throw FormatError("zero count on n-gram line " + std::to_string(lineno));
        counts.entries.emplace_back(pack_kgram(gram), count);
        counts.total += count;
    }
    if (counts.entries.empty()) throw FormatError("n-gram table is empty");
    std::sort(counts.entries.begin(), counts.entries.end());
    // merge duplicate grams
    size_t out = 0;
    for (size_t i = 0; i < counts.entries.size(); i++) {
        if (out > 0 && counts.entries[out - 1].first == counts.entries[i].first)
            counts.entries[out - 1].second += counts.entries[i].second;
        else
            counts.entries[out++] = counts.entries[i];
    }
    counts.entries.resize(out);
    return counts;
}

void write_ngram_tsv(std::ostream& out, const NGramCounts& counts) {
    for (const auto& [key, count] : counts.entries)
        out << unpack_kgram(key, counts.order) << "\t" << count << "\n";
}

NGramModel NGramModel::from_counts(const NGramCounts& counts, std::string provenance) {
    check_order(counts.order);
    if (counts.entries.empty() || counts.total == 0)
        throw PreconditionError("n-gram counts are empty");
    NGramModel model;
    model.order_ = counts.order;
    model.provenance_ = std::move(provenance);
    model.stored_ = counts.entries.size();
    double min_logp = 0.0;
    double log_total = std::log10((double)counts.total);
    auto logp_of = [&](uint64_t count) { return std::log10((double)count) - log_total; };
    for (const auto& [key, count] : counts.entries)
        min_logp = std::min(min_logp, logp_of(count));
    // quantized to float so flat-table misses and the floor() getter agree
    model.floor_ = (double)(float)(min_logp - 2.0);
    if (counts.order <= kMaxFlatOrder) {
        model.flat_.assign(power26(counts.order), (float)model.floor_);
        for (const auto& [key, count] : counts.entries)
            model.flat_[key] = (float)logp_of(count);
    } else {
        model.keys_.reserve(counts.entries.size());
        model.values_.reserve(counts.entries.size());
        for (const auto& [key, count] : counts.entries) {
            model.keys_.push_back(key);
            model.values_.push_back((float)logp_of(count));
        }
    }
    return model;
}

NGramModel NGramModel::build(std::istream& corpus, int order, std::string provenance) {
    return from_counts(count_ngrams(corpus, order), std::move(provenance));
}

namespace {

constexpr char kCacheMagic[4] = {'Z', 'K', 'N', 'G'};
constexpr uint8_t kCacheVersion = 1;

template <typename T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_raw(std::istream& in, T& value, const std::string& path) {
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw FormatError("truncated n-gram cache: " + path);
}

}  // namespace

void NGramModel::save_cache(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write n-gram cache: " + path);
    out.write(kCacheMagic, 4);
    write_raw(out, kCacheVersion);
    write_raw(out, (uint8_t)order_);
    write_raw(out, floor_);
    write_raw(out, (uint32_t)provenance_.size());
    out.write(provenance_.data(), (std::streamsize)provenance_.size());
    write_raw(out, (uint64_t)stored_);
    if (!flat_.empty()) {
        float floorf_ = (float)floor_;
        for (uint32_t key = 0; key < flat_.size(); key++) {
            if (flat_[key] == floorf_) continue;
            write_raw(out, key);
            write_raw(out, flat_[key]);
        }
    } else {
        for (size_t i = 0; i < keys_.size(); i++) {
            write_raw(out, keys_[i]);
            write_raw(out, values_[i]);
        }
    }
    if (!out) throw Error("failed writing n-gram cache: " + path);
}

NGramModel NGramModel::load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open n-gram cache: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCacheMagic, 4) != 0)
        throw FormatError("not an n-gram cache (bad magic): " + path);
    uint8_t version = 0, order = 0;
    read_raw(in, version, path);
    if (version != kCacheVersion)
        throw FormatError("unsupported n-gram cache version " + std::to_string(version) + ": " + path);
    read_raw(in, order, path);
    NGramModel model;
    model.order_ = order;
    check_order(model.order_);
    read_raw(in, model.floor_, path);
    uint32_t prov_len = 0;
    read_raw(in, prov_len, path);
    model.provenance_.resize(prov_len);
    in.read(model.provenance_.data(), prov_len);
    if (!in) throw FormatError("truncated n-gram cache: " + path);
    uint64_t stored = 0;
    read_raw(in, stored, path);
    model.stored_ = stored;
    if (model.order_ <= kMaxFlatOrder)
        model.flat_.assign(power26(model.order_), (float)model.floor_);
    for (uint64_t i = 0; i < stored; i++) {
        uint32_t key = 0;
        float value = 0;
        read_raw(in, key, path);
        read_raw(in, value, path);
        if (!model.flat_.empty()) {
            if (key >= model.flat_.size()) throw FormatError("n-gram cache key out of range: " + path);
            model.flat_[key] = value;
        } else {
            model.keys_.push_back(key);
            model.values_.push_back(value);
        }
    }
    if (!model.keys_.empty() && !std::is_sorted(model.keys_.begin(), model.keys_.end()))
        throw FormatError("n-gram cache keys out of order: " + path);
    return model;
}

NGramModel NGramModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open n-gram model: " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    if (in && std::memcmp(magic, kCacheMagic, 4) == 0) return load_cache(path);
    in.clear();
    in.seekg(0);
    auto counts = parse_ngram_tsv(in);
    return from_counts(counts, path);
}

double NGramModel::lookup(uint32_t packed) const {
    if (!flat_.empty()) return flat_[packed];
    auto it = std::lower_bound(keys_.begin(), keys_.end(), packed);
    if (it == keys_.end() || *it != packed) return floor_;
    return values_[(size_t)(it - keys_.begin())];
}

double NGramModel::lookup_text(const std::string& kgram) const {
    if ((int)kgram.size() != order_)
        throw PreconditionError("k-gram length " + std::to_string(kgram.size()) +
                                " does not match model order " + std::to_string(order_));
    return lookup(pack_kgram(kgram));
}

double NGramModel::score(const std::string& letters, ScoreMode mode, int row_length) const {
    int n = (int)letters.size();
    int row = mode == ScoreMode::per_row && row_length > 0 ? row_length : n;
    if (mode == ScoreMode::per_row && row_length > 0 && n % row_length != 0)
        throw PreconditionError("text length " + std::to_string(n) +
                                " is not a multiple of row length " + std::to_string(row_length));
    if (row < order_)
        throw PreconditionError("scored unit length " + std::to_string(row) +
                                " is shorter than model order " + std::to_string(order_));
    const uint32_t mask = power26(order_ - 1);
    double total = 0.0;
    for (int start = 0; start < n; start += row) {
        uint32_t packed = 0;
        for (int i = 0; i < row; i++) {
            char ch = letters[(size_t)(start + i)];
            if (ch < 'A' || ch > 'Z')
                throw PreconditionError("scored text must be uppercase letters");
            packed = (packed % mask) * 26 + (uint32_t)(ch - 'A');
            if (i >= order_ - 1) total += lookup(packed);
        }
    }
    return total;
}

double NGramModel::score_normalized(const std::string& letters, ScoreMode mode,
                                    int row_length) const {
    int n = (int)letters.size();
    int row = mode == ScoreMode::per_row && row_length > 0 ? row_length : n;
    double windows = (double)(n / row) * (row - order_ + 1);
    return score(letters, mode, row_length) / windows;
}

double letter_entropy(const std::string& letters) {
    int counts[26] = {};
    long total = 0;
    for (char ch : letters) {
        if (ch < 'A' || ch > 'Z')
            throw PreconditionError("entropy input must be uppercase letters");
        counts[ch - 'A']++;
        total++;
    }
    if (total == 0) throw PreconditionError("entropy of empty text");
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        double p = (double)c / (double)total;
        h -= p * std::log2(p);
    }
    return h;
}

WordModel WordModel::parse(std::istream& in) {
    WordModel model;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line) {
            if (!isalpha((unsigned char)ch))
                throw FormatError("word list line " + std::to_string(lineno) +
                                  " has a non-letter character");
            ch = (char)toupper((unsigned char)ch);
        }
        model.words_.push_back(line);
        model.max_word_length_ = std::max(model.max_word_length_, (int)line.size());
    }
    if (model.words_.empty()) throw FormatError("word list is empty");
    double harmonic = 0.0;
    for (size_t r = 0; r < model.words_.size(); r++) harmonic += 1.0 / (double)(r + 1);
    model.logp_.resize(model.words_.size());
    for (size_t r = 0; r < model.words_.size(); r++)
        model.logp_[r] = -std::log10((double)(r + 1)) - std::log10(harmonic);
    model.by_word_.resize(model.words_.size());
    for (size_t r = 0; r < model.words_.size(); r++) model.by_word_[r] = (int)r;
    std::sort(model.by_word_.begin(), model.by_word_.end(),
              [&](int a, int b) { return model.words_[(size_t)a] < model.words_[(size_t)b]; });
    return model;
}

WordModel WordModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open word list: " + path);
    try {
        return parse(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

int WordModel::rank_of(const std::string& word) const {
    auto it = std::lower_bound(by_word_.begin(), by_word_.end(), word,
                               [&](int rank, const std::string& w) { return words_[(size_t)rank] < w; });
    if (it == by_word_.end() || words_[(size_t)*it] != word) return -1;
    return *it;
}

double WordModel::log_probability(const std::string& word) const {
    int rank = rank_of(word);
    if (rank < 0) return kUnknownRunBase + kUnknownPerLetter * (double)word.size();
    return logp_[(size_t)rank];
}

std::vector<std::string> WordModel::segment_run(const std::string& letters) const {
    int n = (int)letters.size();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    // two DP lanes: best parse ending in a known word / in an unknown run
    std::vector<double> known((size_t)n + 1, kNegInf), unknown((size_t)n + 1, kNegInf);
    std::vector<int> word_start((size_t)n + 1, -1);
    std::vector<char> word_prev((size_t)n + 1, 0);  // lane at word_start: 0 known, 1 unknown
    std::vector<char> run_prev((size_t)n + 1, 0);   // lane at i-1 for the unknown step
    known[0] = 0.0;
    for (int i = 1; i <= n; i++) {
        double from_known = known[(size_t)(i - 1)] + kUnknownRunBase + kUnknownPerLetter;
        double from_unknown = unknown[(size_t)(i - 1)] + kUnknownPerLetter;
        if (from_known >= from_unknown) {
            unknown[(size_t)i] = from_known;
            run_prev[(size_t)i] = 0;
        } else {
            unknown[(size_t)i] = from_unknown;
            run_prev[(size_t)i] = 1;
        }
        for (int len = 1; len <= std::min(max_word_length_, i); len++) {
            int j = i - len;
            double base_known = known[(size_t)j], base_unknown = unknown[(size_t)j];
            double base = std::max(base_known, base_unknown);
            if (base == kNegInf) continue;
            int rank = rank_of(letters.substr((size_t)j, (size_t)len));
            if (rank < 0) continue;
            double cand = base + logp_[(size_t)rank];
            if (cand > known[(size_t)i]) {
                known[(size_t)i] = cand;
                word_start[(size_t)i] = j;
                word_prev[(size_t)i] = base_known >= base_unknown ? 0 : 1;
            }
        }
    }
    std::vector<std::string> tokens;
    int i = n;
    int lane = known[(size_t)n] >= unknown[(size_t)n] ? 0 : 1;
    while (i > 0) {
        if (lane == 0) {
            int j = word_start[(size_t)i];
            tokens.push_back(letters.substr((size_t)j, (size_t)(i - j)));
            lane = word_prev[(size_t)i];
            i = j;
        } else {
            int end = i;
            while (true) {
                int prev = run_prev[(size_t)i];
                i--;
                if (prev == 0) break;
            }
            tokens.push_back(letters.substr((size_t)i, (size_t)(end - i)));
            lane = 0;
        }
    }
    std::reverse(tokens.begin(), tokens.end());
    return tokens;
}

std::string WordModel::segment(const std::string& text) const {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        if (!isupper((unsigned char)text[i])) {
            out.push_back(text[i++]);
            continue;
        }
        size_t j = i;
        while (j < text.size() && isupper((unsigned char)text[j])) j++;
        auto tokens = segment_run(text.substr(i, j - i));
        for (size_t t = 0; t < tokens.size(); t++) {
            if (t > 0) out.push_back(' ');
            out += tokens[t];
        }
        i = j;
    }
    return out;
}

}  // namespace zkit
