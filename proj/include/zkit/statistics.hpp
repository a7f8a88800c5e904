#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zkit/grid.hpp"

namespace zkit {

// Ordered symbol pairs at linear distance p, enumerated in the chain order of
// the period-p algorithm: chain starting at position 1 first, then 2, and so
// on. As a multiset this equals {(c_j, c_{j+p}) : 1 <= j <= n-p}.
struct BigramSet {
    int period = 0;
    std::vector<std::pair<char, char>> pairs;
};

// Repeat total for one period. For a bigram occurring c times the repeat
// count is c-1; total_repeats sums that over distinct bigrams.
struct RepeatReport {
    int period = 0;
    int total_repeats = 0;
    int distinct_repeating = 0;  // bigrams with repeat count >= 1
    std::vector<std::pair<std::string, int>> top;  // (bigram, occurrences), most frequent first
};

// Monte Carlo baseline for a repeat total under uniform shuffles of the
// ciphertext cells.
struct ShuffleBaseline {
    int period = 0;
    int trials = 0;
    uint64_t seed = 0;
    int observed = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    double z = 0.0;       // (observed - mean) / stddev
};

// One L-shaped placement: a horizontal and a vertical trigram sharing the
// corner cell, both arms carrying the same symbols read outward from the
// corner.
struct PivotPlacement {
    int corner_row = 0;  // 0-based
    int corner_col = 0;
    std::string trigram;  // arm content read outward from the corner
};

// A pair of identically-oriented placements. Orientation is the direction the
// two arms extend from the corner; vertical_dir and horizontal_dir are -1/+1
// row and column steps.
struct PivotPattern {
    int vertical_dir = 0;
    int horizontal_dir = 0;
    PivotPlacement first;
    PivotPlacement second;
};

struct RowRepeatReport {
    // Repetitions within each row: row length minus distinct symbols, i.e.
    // every occurrence of a symbol beyond its first counts once.
    std::vector<int> per_row;
    int clean_rows = 0;  // rows with zero repeating symbols
};

struct NGramRepeat {
    std::string ngram;
    std::vector<int> positions;  // 1-indexed linear positions
};

// Period p bigrams per the period-p algorithm. Requires p <= n/2.
BigramSet period_bigrams(const SymbolGrid& grid, int p);

// Repeat total at period p; precondition as period_bigrams.
RepeatReport repeating_bigram_count(const SymbolGrid& grid, int p);

// Repeat total of a raw symbol sequence at period p. Used when the sequence
// is a reordering rather than a grid. No top list is filled.
int sequence_repeats(const std::string& cells, int p);

// One report per period in [p_min, p_max], ordered by period.
std::vector<RepeatReport> period_scan(const SymbolGrid& grid, int p_min, int p_max);

// Uniform shuffles of the cell multiset; deterministic per (seed, trial).
// The parallel kernel and the serial reference produce identical results.
ShuffleBaseline shuffle_baseline(const SymbolGrid& grid, int p, int trials, uint64_t seed);
ShuffleBaseline shuffle_baseline_serial(const SymbolGrid& grid, int p, int trials, uint64_t seed);

// Probability that two random cells hold the same symbol.
double index_of_coincidence(const SymbolGrid& grid);

// Alphabet size divided by cipher length.
double multiplicity(const SymbolGrid& grid);

RowRepeatReport row_repeat_analysis(const SymbolGrid& grid);

// All pairs of identically-oriented pivot placements, deduplicated. Each
// placement is an L whose two arms repeat one trigram; the two placements of
// a pair share orientation but not necessarily content, which matches the
// observed incidence of about one pair per few hundred thousand shuffles.
std::vector<PivotPattern> pivot_search(const SymbolGrid& grid);

// Count of pivot pairs in a raw cell sequence with the given dims; cheaper
// entry point for Monte Carlo incidence runs.
int pivot_pair_count(const std::string& cells, int rows, int cols);

// Longest perfectly alternating a/b occurrence subsequence divided by the
// total occurrences of a and b. Both symbols must occur and differ.
double cycle_score(const SymbolGrid& grid, char a, char b);

// All contiguous period-1 k-grams occurring at least twice, with 1-indexed
// linear positions, ordered by first occurrence.
std::vector<NGramRepeat> repeating_ngrams(const SymbolGrid& grid, int k);

}  // namespace zkit
