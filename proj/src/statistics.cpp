#include "zkit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "zkit/errors.hpp"
#include "zkit/rng.hpp"

namespace zkit {

namespace {

void check_period(int p, int n) {
    if (p < 1) throw PreconditionError("period must be positive");
    if (p > n / 2)
        throw PreconditionError("period " + std::to_string(p) + " exceeds n/2 = " + std::to_string(n / 2));
}

// Repeat total over a sequence of small symbol ids, reusing a counts scratch
// buffer. Returns (n - p) - distinct.
int repeats_ids(const std::vector<int>& ids, int p, int alpha_size, std::vector<int>& counts,
                std::vector<int>& touched) {
    counts.assign((size_t)alpha_size * (size_t)alpha_size, 0);
    touched.clear();
    int n = (int)ids.size();
    int distinct = 0;
    for (int j = 0; j + p < n; j++) {
        int key = ids[(size_t)j] * alpha_size + ids[(size_t)(j + p)];
        if (counts[(size_t)key]++ == 0) distinct++;
    }
    return (n - p) - distinct;
}

}  // namespace

BigramSet period_bigrams(const SymbolGrid& grid, int p) {
    int n = grid.size();
    check_period(p, n);
    BigramSet out;
    out.period = p;
    out.pairs.reserve((size_t)(n - p));
    // Chain order: positions 1, 1+p, 1+2p, ... then 2, 2+p, ... (1-indexed).
    for (int start = 0; start < p; start++)
        for (int j = start; j + p < n; j += p)
            out.pairs.emplace_back(grid.at(j), grid.at(j + p));
    return out;
}

RepeatReport repeating_bigram_count(const SymbolGrid& grid, int p) {
    int n = grid.size();
    check_period(p, n);
    std::map<std::pair<char, char>, int> counts;
    for (int j = 0; j + p < n; j++) counts[{grid.at(j), grid.at(j + p)}]++;
    RepeatReport rep;
    rep.period = p;
    for (const auto& [bigram, c] : counts) {
        if (c >= 2) {
            rep.total_repeats += c - 1;
            rep.distinct_repeating++;
            rep.top.push_back({std::string{bigram.first, bigram.second}, c});
        }
    }
    std::sort(rep.top.begin(), rep.top.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (rep.top.size() > 10) rep.top.resize(10);
    return rep;
}

int sequence_repeats(const std::string& cells, int p) {
    int n = (int)cells.size();
    check_period(p, n);
    std::unordered_map<int, int> counts;
    counts.reserve((size_t)n * 2);
    int repeats = 0;
    for (int j = 0; j + p < n; j++) {
        int key = (unsigned char)cells[(size_t)j] * 256 + (unsigned char)cells[(size_t)(j + p)];
        if (counts[key]++ >= 1) repeats++;
    }
    return repeats;
}

std::vector<RepeatReport> period_scan(const SymbolGrid& grid, int p_min, int p_max) {
    std::vector<RepeatReport> out;
    for (int p = p_min; p <= p_max; p++) out.push_back(repeating_bigram_count(grid, p));
    return out;
}

namespace {

ShuffleBaseline shuffle_stats(const SymbolGrid& grid, int p, int trials, uint64_t seed, bool parallel) {
    int n = grid.size();
    check_period(p, n);
    if (trials < 2) throw PreconditionError("shuffle baseline needs at least 2 trials");

    int alpha = grid.alphabet().size();
    std::vector<int> base_ids((size_t)n);
    for (int i = 0; i < n; i++) base_ids[(size_t)i] = grid.alphabet().index(grid.at(i));

    std::vector<int> results((size_t)trials);
    // Each trial derives its own stream from (seed, trial), so the schedule
    // of threads cannot change any value.
#ifdef ZKIT_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int t = 0; t < trials; t++) {
        std::vector<int> ids = base_ids;
        Rng rng(derive_stream(seed, (uint64_t)t));
        for (size_t i = ids.size(); i > 1; i--) {
            size_t j = (size_t)rng.below(i);
            std::swap(ids[i - 1], ids[j]);
        }
        std::vector<int> counts, touched;
        results[(size_t)t] = repeats_ids(ids, p, alpha, counts, touched);
    }
    (void)parallel;

    double mean = 0.0;
    for (int v : results) mean += v;
    mean /= trials;
    double var = 0.0;
    for (int v : results) var += (v - mean) * (v - mean);
    var /= (trials - 1);

    ShuffleBaseline out;
    out.period = p;
    out.trials = trials;
    out.seed = seed;
    out.observed = repeating_bigram_count(grid, p).total_repeats;
    out.mean = mean;
    out.stddev = std::sqrt(var);
    out.z = out.stddev > 0 ? (out.observed - mean) / out.stddev : 0.0;
    return out;
}

}  // namespace

ShuffleBaseline shuffle_baseline(const SymbolGrid& grid, int p, int trials, uint64_t seed) {
    return shuffle_stats(grid, p, trials, seed, true);
}

ShuffleBaseline shuffle_baseline_serial(const SymbolGrid& grid, int p, int trials, uint64_t seed) {
    return shuffle_stats(grid, p, trials, seed, false);
}

double index_of_coincidence(const SymbolGrid& grid) {
    int n = grid.size();
    if (n < 2) throw PreconditionError("index of coincidence needs n >= 2");
    std::vector<long long> freq((size_t)grid.alphabet().size(), 0);
    for (char c : grid.cells()) freq[(size_t)grid.alphabet().index(c)]++;
    long long num = 0;
    for (long long f : freq) num += f * (f - 1);
    return (double)num / ((double)n * (n - 1));
}

double multiplicity(const SymbolGrid& grid) {
    return (double)grid.alphabet().size() / (double)grid.size();
}

RowRepeatReport row_repeat_analysis(const SymbolGrid& grid) {
    RowRepeatReport out;
    for (int r = 0; r < grid.rows(); r++) {
        std::array<int, 256> seen{};
        int repeats = 0;
        for (int c = 0; c < grid.cols(); c++)
            if (seen[(unsigned char)grid.at(r, c)]++ >= 1) repeats++;
        out.per_row.push_back(repeats);
        if (repeats == 0) out.clean_rows++;
    }
    return out;
}

namespace {

struct Orientation {
    int vd;
    int hd;
};
constexpr Orientation kOrientations[4] = {{-1, 1}, {-1, -1}, {1, 1}, {1, -1}};

std::vector<PivotPlacement> placements_for(const std::string& cells, int rows, int cols,
                                           const Orientation& o) {
    std::vector<PivotPlacement> out;
    for (int r = 0; r < rows; r++) {
        int r3 = r + o.vd * 3;
        if (r3 < 0 || r3 >= rows) continue;
        for (int c = 0; c < cols; c++) {
            int c3 = c + o.hd * 3;
            if (c3 < 0 || c3 >= cols) continue;
            bool match = true;
            for (int k = 1; k <= 3 && match; k++)
                match = cells[(size_t)((r + o.vd * k) * cols + c)] ==
                        cells[(size_t)(r * cols + c + o.hd * k)];
            if (!match) continue;
            PivotPlacement p;
            p.corner_row = r;
            p.corner_col = c;
            for (int k = 1; k <= 3; k++) p.trigram.push_back(cells[(size_t)(r * cols + c + o.hd * k)]);
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

std::vector<PivotPattern> pivot_search(const SymbolGrid& grid) {
    if (grid.rows() < 3 || grid.cols() < 3)
        throw PreconditionError("pivot search needs at least a 3x3 grid");
    std::vector<PivotPattern> out;
    for (const auto& o : kOrientations) {
        auto placements = placements_for(grid.cells(), grid.rows(), grid.cols(), o);
        for (size_t i = 0; i < placements.size(); i++)
            for (size_t j = i + 1; j < placements.size(); j++) {
                PivotPattern pat;
                pat.vertical_dir = o.vd;
                pat.horizontal_dir = o.hd;
                pat.first = placements[i];
                pat.second = placements[j];
                out.push_back(std::move(pat));
            }
    }
    return out;
}

int pivot_pair_count(const std::string& cells, int rows, int cols) {
    int total = 0;
    for (const auto& o : kOrientations) {
        int k = (int)placements_for(cells, rows, cols, o).size();
        total += k * (k - 1) / 2;
    }
    return total;
}

double cycle_score(const SymbolGrid& grid, char a, char b) {
    if (a == b) throw PreconditionError("cycle score needs two distinct symbols");
    if (grid.alphabet().index(a) < 0 || grid.alphabet().index(b) < 0)
        throw PreconditionError("cycle score symbols must occur in the grid");
    int total = 0;
    int longest = 0, end_a = 0, end_b = 0;
    for (char c : grid.cells()) {
        if (c == a) {
            end_a = end_b + 1;
            total++;
        } else if (c == b) {
            end_b = end_a + 1;
            total++;
        } else {
            continue;
        }
        longest = std::max({longest, end_a, end_b});
    }
    return (double)longest / (double)total;
}

std::vector<NGramRepeat> repeating_ngrams(const SymbolGrid& grid, int k) {
    if (k < 2) throw PreconditionError("ngram length must be at least 2");
    if (k > grid.size()) throw PreconditionError("ngram length exceeds cipher length");
    std::map<std::string, std::vector<int>> positions;
    const std::string& cells = grid.cells();
    std::vector<std::string> order;
    for (int j = 0; j + k <= grid.size(); j++) {
        std::string g = cells.substr((size_t)j, (size_t)k);
        auto it = positions.find(g);
        if (it == positions.end()) {
            positions[g] = {j + 1};
            order.push_back(std::move(g));
        } else {
            it->second.push_back(j + 1);
        }
    }
    std::vector<NGramRepeat> out;
    for (const auto& g : order) {
        auto& pos = positions[g];
        if (pos.size() >= 2) out.push_back({g, pos});
    }
    return out;
}

}  // namespace zkit
