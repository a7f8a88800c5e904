#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zkit/grid.hpp"
#include "zkit/key.hpp"
#include "zkit/language_model.hpp"
#include "zkit/rng.hpp"

namespace zkit {

// Known or suspected plaintext pinned at a linear position of the
// post-transposition reading order. start is 0-based internally; crib files
// use 1-indexed positions.
struct Crib {
    int start = 0;
    std::string text;
};

std::vector<Crib> parse_cribs(std::istream& in);
std::vector<Crib> load_crib_file(const std::string& path);

// Fixes the symbol under every crib letter, closing over repeated symbols.
// Two cribs forcing one symbol to different letters raise ConflictError
// naming the symbol and both positions.
SubstitutionKey derive_constraints(const SymbolGrid& grid, const std::vector<Crib>& cribs);

struct SolverConfig {
    double lambda = 0.1;       // entropy weight in the composite objective
    long iterations = 200000;  // annealing steps per restart
    int restarts = 5;
    double t0 = 0.0;           // initial temperature; 0 calibrates from the data
    double decay = 0.0;        // geometric factor per step; 0 picks a default
    uint64_t seed = 1;
    std::vector<Crib> cribs;
    ScoreMode mode = ScoreMode::linear;
    int jobs = 0;              // parallel restarts; 0 uses the OpenMP default
};

struct CandidateSolution {
    SubstitutionKey key;
    std::string plaintext;
    double score = 0.0;    // ngram + lambda * entropy
    double ngram = 0.0;    // per-window normalized log10 score
    double entropy = 0.0;  // letter entropy, bits
    std::string plan_id;
    uint64_t seed = 0;
    int restart = 0;
};

// Remaps exactly one symbol outside fixed to a different letter, uniformly
// over the 25 alternatives. Throws PreconditionError when every symbol is
// fixed.
SubstitutionKey perturb(const SubstitutionKey& key, const std::string& fixed_symbols, Rng& rng);

// Composite objective of a finished plaintext under the config weights.
double composite_score(const NGramModel& model, const SolverConfig& config,
                       const std::string& plaintext, int row_length);

// Simulated annealing over substitution keys: random initial key per
// restart, single-symbol perturbations, geometric cooling, best state kept.
// Restart r draws from derive_stream(config.seed, r); equal scores go to the
// lowest restart index, so the parallel and serial paths agree exactly.
CandidateSolution solve(const SymbolGrid& grid, const NGramModel& model,
                        const SolverConfig& config);
CandidateSolution solve_serial(const SymbolGrid& grid, const NGramModel& model,
                               const SolverConfig& config);

struct BatchEntry {
    std::string plan_id;
    CandidateSolution best;
    bool failed = false;
    std::string error;
};

// Solves every variant, ranking results by composite score (ties keep the
// variant order). Variant v derives its seed from (config.seed, v), so the
// report is deterministic regardless of worker count; per-variant errors are
// recorded and the batch continues.
std::vector<BatchEntry> batch_solve(const std::vector<std::pair<std::string, SymbolGrid>>& variants,
                                    const NGramModel& model, const SolverConfig& config);

}  // namespace zkit
