#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zkit {

enum class ScoreMode { linear, per_row };

// Raw k-gram counts, the interchange form behind the "KGRAM<TAB>count" file
// format. Keys are packed base-26 indices.
struct NGramCounts {
    int order = 0;
    uint64_t total = 0;
    std::vector<std::pair<uint32_t, uint64_t>> entries;  // sorted by key
};

// Counts k-windows per line of the stream (windows never span lines) after
// uppercasing and stripping non-letters.
NGramCounts count_ngrams(std::istream& corpus, int order);

NGramCounts parse_ngram_tsv(std::istream& in);
void write_ngram_tsv(std::ostream& out, const NGramCounts& counts);

std::string unpack_kgram(uint32_t packed, int order);
uint32_t pack_kgram(const std::string& kgram);

// Letter k-gram statistics over A-Z as log10 probabilities. Orders 2 to 5
// are stored as a flat 26^k table for constant-time lookup; order 6 falls
// back to a sorted sparse table to stay within memory. Unseen k-grams score
// at a floor two decades below the smallest stored probability.
class NGramModel {
public:
    static NGramModel from_counts(const NGramCounts& counts, std::string provenance);
    static NGramModel build(std::istream& corpus, int order, std::string provenance);

    // Compact binary cache with a magic header and version byte.
    static NGramModel load_cache(const std::string& path);
    void save_cache(const std::string& path) const;

    // Reads a model file, dispatching on the magic bytes: binary cache or
    // "KGRAM<TAB>count" text.
    static NGramModel load_file(const std::string& path);

    int order() const { return order_; }
    double floor() const { return floor_; }
    const std::string& provenance() const { return provenance_; }
    size_t stored() const { return stored_; }

    // log10 probability of one k-gram given as a packed base-26 index.
    double lookup(uint32_t packed) const;
    // Convenience for tests; text must be exactly k letters A-Z.
    double lookup_text(const std::string& kgram) const;

    // Sum of window log-probabilities. Linear mode walks all n-k+1 windows
    // of the whole text; per_row mode scores each row separately and never
    // counts a window that crosses a row boundary. row_length 0 means one
    // row; otherwise it must divide the text length.
    double score(const std::string& letters, ScoreMode mode, int row_length = 0) const;

    // score divided by the number of windows counted, for comparisons
    // across different text lengths.
    double score_normalized(const std::string& letters, ScoreMode mode, int row_length = 0) const;

private:
    int order_ = 0;
    double floor_ = 0.0;
    size_t stored_ = 0;
    std::string provenance_;
    std::vector<float> flat_;      // 26^k entries when small enough
    std::vector<uint32_t> keys_;   // sorted, parallel to values_, when sparse
    std::vector<float> values_;
};

// Shannon entropy in bits of the letter frequency distribution of the text.
double letter_entropy(const std::string& letters);

// Ranked word list; probabilities follow a Zipf law over the rank, so the
// file order is the frequency order, most frequent first.
class WordModel {
public:
    static WordModel parse(std::istream& in);
    static WordModel load_file(const std::string& path);

    size_t size() const { return words_.size(); }
    bool contains(const std::string& word) const { return rank_of(word) >= 0; }
    double log_probability(const std::string& word) const;

    // Maximum-likelihood segmentation by dynamic programming. Inserts spaces
    // only, between runs of uppercase letters; other characters pass through
    // and act as segment boundaries. Spans no word sequence explains better
    // than the unknown-run penalty stay together as single unspaced runs.
    std::string segment(const std::string& text) const;

private:
    std::vector<std::string> words_;
    std::vector<double> logp_;     // by rank
    std::vector<int> by_word_;     // ranks sorted by word text
    int max_word_length_ = 0;

    int rank_of(const std::string& word) const;  // -1 when absent
    std::vector<std::string> segment_run(const std::string& letters) const;
};

}  // namespace zkit
