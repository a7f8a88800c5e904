#pragma once

#include <string>
#include <vector>

#include "zkit/grid.hpp"
#include "zkit/solver.hpp"
#include "zkit/statistics.hpp"

namespace zkit {

// Ciphertext overview: dimensions, alphabet, index of coincidence,
// multiplicity, row repeats, the requested period repeats, plus any shuffle
// baselines and pivot pairs computed by the caller.
std::string stats_report_json(const SymbolGrid& grid,
                              const std::vector<RepeatReport>& periods,
                              const std::vector<ShuffleBaseline>& baselines,
                              const std::vector<PivotPattern>& pivots);

// One row per period: period,total_repeats,distinct_repeating.
std::string scan_report_csv(const std::vector<RepeatReport>& scan);
std::string scan_report_json(const std::vector<RepeatReport>& scan);

std::string shuffle_report_json(const ShuffleBaseline& baseline);

// Candidates in the order given; each record carries plaintext, score parts
// and the key as "SYMBOL=LETTER" entries.
std::string solve_report_json(const std::vector<CandidateSolution>& candidates);

// Batch results ranked as produced by batch_solve. CSV keeps the top_k
// successful entries (top_k <= 0 keeps all).
std::string batch_report_json(const std::vector<BatchEntry>& entries);
std::string batch_report_csv(const std::vector<BatchEntry>& entries, int top_k);

}  // namespace zkit
