#include "zkit/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>

#include "zkit/cipher.hpp"
#include "zkit/errors.hpp"

#ifdef ZKIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace zkit {

std::vector<Crib> parse_cribs(std::istream& in) {
    std::vector<Crib> cribs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError("crib line " + std::to_string(lineno) + " has no tab separator");
        Crib crib;
        try {
            size_t used = 0;
            crib.start = std::stoi(line.substr(0, tab), &used) - 1;
            if (used != tab) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            throw FormatError("bad position on crib line " + std::to_string(lineno));
        }
        crib.text = line.substr(tab + 1);
        if (crib.start < 0)
            throw FormatError("crib position must be at least 1 on line " + std::to_string(lineno));
        if (crib.text.empty())
            throw FormatError("empty crib text on line " + std::to_string(lineno));
        for (char ch : crib.text)
            if (ch < 'A' || ch > 'Z')
                throw FormatError("crib text must be uppercase letters on line " +
                                  std::to_string(lineno));
        cribs.push_back(std::move(crib));
    }
    return cribs;
}

std::vector<Crib> load_crib_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open crib file: " + path);
    try {
        return parse_cribs(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

SubstitutionKey derive_constraints(const SymbolGrid& grid, const std::vector<Crib>& cribs) {
    SubstitutionKey key;
    std::array<int, 256> first_pos;
    first_pos.fill(0);
    for (const auto& crib : cribs) {
        if (crib.start + (int)crib.text.size() > grid.size())
            throw PreconditionError("crib at position " + std::to_string(crib.start + 1) +
                                    " runs past the end of the text");
        for (size_t i = 0; i < crib.text.size(); i++) {
            int pos = crib.start + (int)i;
            char symbol = grid.at(pos);
            char letter = crib.text[i];
            char existing = key.lookup(symbol);
            if (existing == 0) {
                key.set(symbol, letter);
                first_pos[(unsigned char)symbol] = pos + 1;
            } else if (existing != letter) {
                throw ConflictError("cribs force symbol '" + std::string(1, symbol) + "' to both " +
                                        std::string(1, existing) + " (position " +
                                        std::to_string(first_pos[(unsigned char)symbol]) + ") and " +
                                        std::string(1, letter) + " (position " +
                                        std::to_string(pos + 1) + ")",
                                    symbol, first_pos[(unsigned char)symbol], pos + 1);
            }
        }
    }
    return key;
}

SubstitutionKey perturb(const SubstitutionKey& key, const std::string& fixed_symbols, Rng& rng) {
    std::string movable;
    for (char symbol : key.coverage())
        if (fixed_symbols.find(symbol) == std::string::npos) movable.push_back(symbol);
    if (movable.empty()) throw PreconditionError("no movable symbols: every symbol is crib-fixed");
    char symbol = movable[(size_t)rng.below(movable.size())];
    char old_letter = key.lookup(symbol);
    char letter = (char)('A' + rng.below(25));
    if (letter >= old_letter) letter++;
    SubstitutionKey out = key;
    out.set(symbol, letter);
    return out;
}

double composite_score(const NGramModel& model, const SolverConfig& config,
                       const std::string& plaintext, int row_length) {
    return model.score_normalized(plaintext, config.mode, row_length) +
           config.lambda * letter_entropy(plaintext);
}

namespace {

// Relative English letter frequencies (A..Z, percent). Proposals draw from
// this distribution so candidate texts start near a plausible letter mix.
// Exact values are uncritical; smoothing keeps every letter reachable.
constexpr std::array<double, 26> kLetterFreq = {
    8.17, 1.49, 2.78, 4.25, 12.70, 2.23, 2.02, 6.09, 6.97, 0.15, 0.77, 4.03, 2.41,
    6.75, 7.51, 1.93, 0.10,  5.99, 6.33, 9.06, 2.76, 0.98, 2.36, 0.15, 1.97, 0.07};

// Immutable per-solve description shared by all restarts.
struct Workspace {
    const SymbolGrid* grid = nullptr;
    const NGramModel* model = nullptr;
    const SolverConfig* config = nullptr;
    int n = 0, order = 0, row = 0;
    double window_count = 0;
    std::string symbols;                     // distinct symbols, first-seen order
    std::vector<std::vector<int>> positions; // per symbol
    std::vector<char> fixed_letter;          // 0 when free
    std::vector<int> movable;                // symbol indices open to perturbation
    std::vector<double> plogp;               // c -> (c/n) * log2(c/n)
    std::array<double, 26> letter_cdf{};     // cumulative proposal distribution
    uint32_t high_mask = 0;                  // 26^(order-1)
};

Workspace make_workspace(const SymbolGrid& grid, const NGramModel& model,
                         const SolverConfig& config) {
    Workspace ws;
    ws.grid = &grid;
    ws.model = &model;
    ws.config = &config;
    ws.n = grid.size();
    ws.order = model.order();
    ws.row = config.mode == ScoreMode::per_row ? grid.cols() : ws.n;
    if (ws.row < ws.order)
        throw PreconditionError("scored unit length " + std::to_string(ws.row) +
                                " is shorter than model order " + std::to_string(ws.order));
    if (config.iterations < 1) throw PreconditionError("iterations must be at least 1");
    if (config.restarts < 1) throw PreconditionError("restarts must be at least 1");
    if (config.decay != 0.0 && (config.decay <= 0.0 || config.decay >= 1.0))
        throw PreconditionError("temperature decay must lie in (0, 1)");
    if (config.lambda < 0.0) throw PreconditionError("entropy weight must be non-negative");
    ws.window_count = (double)(ws.n / ws.row) * (ws.row - ws.order + 1);
    SubstitutionKey constraints = derive_constraints(grid, config.cribs);
    std::array<int, 256> index;
    index.fill(-1);
    for (int pos = 0; pos < ws.n; pos++) {
        char symbol = grid.at(pos);
        int si = index[(unsigned char)symbol];
        if (si < 0) {
            si = (int)ws.symbols.size();
            index[(unsigned char)symbol] = si;
            ws.symbols.push_back(symbol);
            ws.positions.emplace_back();
            ws.fixed_letter.push_back(constraints.lookup(symbol));
        }
        ws.positions[(size_t)si].push_back(pos);
    }
    for (size_t si = 0; si < ws.symbols.size(); si++)
        if (!ws.fixed_letter[si]) ws.movable.push_back((int)si);
    if (ws.movable.empty())
        throw PreconditionError("no movable symbols: every symbol is crib-fixed");
    ws.plogp.assign((size_t)ws.n + 1, 0.0);
    for (int c = 1; c <= ws.n; c++) {
        double p = (double)c / (double)ws.n;
        ws.plogp[(size_t)c] = p * std::log2(p);
    }
    ws.high_mask = 1;
    for (int i = 0; i < ws.order - 1; i++) ws.high_mask *= 26;
    double freq_total = 0;
    for (int i = 0; i < 26; i++) freq_total += kLetterFreq[(size_t)i] + 0.25;
    double acc = 0;
    for (int i = 0; i < 26; i++) {
        acc += (kLetterFreq[(size_t)i] + 0.25) / freq_total;
        ws.letter_cdf[(size_t)i] = acc;
    }
    ws.letter_cdf[25] = 1.0;
    return ws;
}

// One annealing restart with incremental rescoring.
struct Anneal {
    const Workspace& ws;
    Rng rng;
    std::string letters;              // current plaintext
    std::vector<char> letter_of;      // per symbol index
    std::array<int, 26> counts{};
    double ngram_sum = 0;
    double entropy = 0;
    std::vector<int> window_buf;

    Anneal(const Workspace& w, uint64_t stream) : ws(w), rng(stream) {
        letter_of.resize(ws.symbols.size());
        for (size_t si = 0; si < ws.symbols.size(); si++)
            letter_of[si] = ws.fixed_letter[si] ? ws.fixed_letter[si] : sample_letter();
        letters.assign((size_t)ws.n, 'A');
        counts.fill(0);
        for (size_t si = 0; si < ws.symbols.size(); si++)
            for (int pos : ws.positions[si]) {
                letters[(size_t)pos] = letter_of[si];
                counts[letter_of[si] - 'A']++;
            }
        ngram_sum = full_ngram_sum();
        entropy = full_entropy();
    }

    double full_ngram_sum() const {
        double total = 0;
        for (int start = 0; start + ws.order <= ws.n; start++) {
            if (start % ws.row > ws.row - ws.order) continue;
            total += window_logp(start);
        }
        return total;
    }

    double full_entropy() const {
        double h = 0;
        for (int c : counts) h -= ws.plogp[(size_t)c];
        return h;
    }

    double window_logp(int start) const {
        uint32_t packed = 0;
        for (int i = 0; i < ws.order; i++)
            packed = packed * 26 + (uint32_t)(letters[(size_t)(start + i)] - 'A');
        return ws.model->lookup(packed);
    }

    double objective() const { return ngram_sum / ws.window_count + ws.config->lambda * entropy; }

    char sample_letter() {
        double u = rng.uniform();
        int idx = (int)(std::lower_bound(ws.letter_cdf.begin(), ws.letter_cdf.end(), u) -
                        ws.letter_cdf.begin());
        return (char)('A' + std::min(idx, 25));
    }

    // Frequency-weighted proposal, resampled a few times to avoid the no-op.
    char propose_letter(char old_letter) {
        for (int attempt = 0; attempt < 8; attempt++) {
            char letter = sample_letter();
            if (letter != old_letter) return letter;
        }
        char letter = (char)('A' + rng.below(25));
        if (letter >= old_letter) letter++;
        return letter;
    }

    // Window starts whose span contains any position of the symbol, honoring
    // row boundaries; sorted and unique.
    void collect_windows(int si) {
        window_buf.clear();
        for (int pos : ws.positions[(size_t)si]) {
            int row_start = (pos / ws.row) * ws.row;
            int lo = std::max(row_start, pos - ws.order + 1);
            int hi = std::min(pos, row_start + ws.row - ws.order);
            for (int s = lo; s <= hi; s++) window_buf.push_back(s);
        }
        std::sort(window_buf.begin(), window_buf.end());
        window_buf.erase(std::unique(window_buf.begin(), window_buf.end()), window_buf.end());
    }

    // Applies the remap and returns the objective delta; call again with the
    // same arguments reversed to undo.
    double remap(int si, char to) {
        char from = letter_of[(size_t)si];
        collect_windows(si);
        double before = 0;
        for (int s : window_buf) before += window_logp(s);
        for (int pos : ws.positions[(size_t)si]) letters[(size_t)pos] = to;
        letter_of[(size_t)si] = to;
        double after = 0;
        for (int s : window_buf) after += window_logp(s);
        int moved = (int)ws.positions[(size_t)si].size();
        double dh = ws.plogp[(size_t)counts[from - 'A']] + ws.plogp[(size_t)counts[to - 'A']];
        counts[from - 'A'] -= moved;
        counts[to - 'A'] += moved;
        dh -= ws.plogp[(size_t)counts[from - 'A']] + ws.plogp[(size_t)counts[to - 'A']];
        ngram_sum += after - before;
        entropy += dh;
        return (after - before) / ws.window_count + ws.config->lambda * dh;
    }

    CandidateSolution run(long iterations, double t0, double decay) {
        double current = objective();
        double best = current;
        std::vector<char> best_letters = letter_of;
        double temperature = t0;
        const bool can_swap = ws.movable.size() >= 2;
        for (long it = 0; it < iterations; it++) {
            double delta;
            int si = ws.movable[(size_t)rng.below(ws.movable.size())];
            char old_letter = letter_of[(size_t)si];
            int sj = -1;
            char other_letter = 0;
            if (can_swap && rng.below(8) < 3) {
                sj = ws.movable[(size_t)rng.below(ws.movable.size())];
                other_letter = letter_of[(size_t)sj];
                if (sj == si || other_letter == old_letter) sj = -1;
            }
            if (sj >= 0)
                delta = remap(si, other_letter) + remap(sj, old_letter);
            else
                delta = remap(si, propose_letter(old_letter));
            if (delta >= 0 || rng.uniform() < std::exp(delta / temperature)) {
                current += delta;
                if (current > best) {
                    best = current;
                    best_letters = letter_of;
                }
            } else {
                remap(si, old_letter);
                if (sj >= 0) remap(sj, other_letter);
            }
            temperature *= decay;
        }
        CandidateSolution out;
        SubstitutionKey key;
        for (size_t si = 0; si < ws.symbols.size(); si++) key.set(ws.symbols[si], best_letters[si]);
        out.key = key;
        out.plaintext = decrypt(*ws.grid, key);
        out.entropy = letter_entropy(out.plaintext);
        out.ngram = ws.model->score_normalized(out.plaintext, ws.config->mode,
                                               ws.config->mode == ScoreMode::per_row
                                                   ? ws.grid->cols()
                                                   : 0);
        out.score = out.ngram + ws.config->lambda * out.entropy;
        return out;
    }

    // Median worsening magnitude over probe moves, so the starting
    // temperature accepts about half of the worsening proposals.
    double calibrate_t0() {
        std::vector<double> drops;
        const int probes = 64;
        for (int i = 0; i < probes; i++) {
            int si = ws.movable[(size_t)rng.below(ws.movable.size())];
            char old_letter = letter_of[(size_t)si];
            char letter = propose_letter(old_letter);
            double delta = remap(si, letter);
            remap(si, old_letter);
            if (delta < 0) drops.push_back(-delta);
        }
        if (drops.empty()) return 1.0;
        std::sort(drops.begin(), drops.end());
        return drops[drops.size() / 2] / std::log(2.0);
    }
};

CandidateSolution run_restart(const Workspace& ws, int restart) {
    Anneal anneal(ws, derive_stream(ws.config->seed, (uint64_t)restart));
    double t0 = ws.config->t0 > 0 ? ws.config->t0 : anneal.calibrate_t0();
    double decay = ws.config->decay > 0
                       ? ws.config->decay
                       : std::pow(1e-4, 1.0 / (double)ws.config->iterations);
    CandidateSolution out = anneal.run(ws.config->iterations, t0, decay);
    out.seed = ws.config->seed;
    out.restart = restart;
    return out;
}

CandidateSolution pick_best(std::vector<CandidateSolution>& results) {
    size_t winner = 0;
    for (size_t r = 1; r < results.size(); r++)
        if (results[r].score > results[winner].score) winner = r;
    return std::move(results[winner]);
}

}  // namespace

CandidateSolution solve_serial(const SymbolGrid& grid, const NGramModel& model,
                               const SolverConfig& config) {
    Workspace ws = make_workspace(grid, model, config);
    std::vector<CandidateSolution> results((size_t)config.restarts);
    for (int r = 0; r < config.restarts; r++) results[(size_t)r] = run_restart(ws, r);
    return pick_best(results);
}

CandidateSolution solve(const SymbolGrid& grid, const NGramModel& model,
                        const SolverConfig& config) {
#ifdef ZKIT_HAVE_OPENMP
    Workspace ws = make_workspace(grid, model, config);
    std::vector<CandidateSolution> results((size_t)config.restarts);
    int jobs = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int r = 0; r < config.restarts; r++) results[(size_t)r] = run_restart(ws, r);
    return pick_best(results);
#else
    return solve_serial(grid, model, config);
#endif
}

std::vector<BatchEntry> batch_solve(const std::vector<std::pair<std::string, SymbolGrid>>& variants,
                                    const NGramModel& model, const SolverConfig& config) {
    std::vector<BatchEntry> entries;
    entries.reserve(variants.size());
    for (size_t v = 0; v < variants.size(); v++) {
        BatchEntry entry;
        entry.plan_id = variants[v].first;
        SolverConfig derived = config;
        derived.seed = derive_stream(config.seed, v);
        try {
            entry.best = solve(variants[v].second, model, derived);
            entry.best.plan_id = entry.plan_id;
        } catch (const Error& e) {
            entry.failed = true;
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    std::stable_sort(entries.begin(), entries.end(), [](const BatchEntry& a, const BatchEntry& b) {
        if (a.failed != b.failed) return !a.failed;
        if (a.failed) return false;
        return a.best.score > b.best.score;
    });
    return entries;
}

}  // namespace zkit
