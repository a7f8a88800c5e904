#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef ZKIT_HAVE_OPENMP
#include <omp.h>
#endif

#include "zkit/cipher.hpp"
#include "zkit/errors.hpp"
#include "zkit/generator.hpp"
#include "zkit/grid.hpp"
#include "zkit/key.hpp"
#include "zkit/language_model.hpp"
#include "zkit/manifest.hpp"
#include "zkit/report.hpp"
#include "zkit/rng.hpp"
#include "zkit/solver.hpp"
#include "zkit/statistics.hpp"
#include "zkit/transposition.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace zkit;

namespace {

constexpr const char* kVersion = "1.0.0";

// Digests of the bundled Z340 reproduction files. reproduce-z340 refuses to
// run on data that does not match, so the shipped result cannot drift
// silently. Regenerate with tools/refresh_digests.sh after any data change.
const std::map<std::string, std::string>& data_digests() {
    static const std::map<std::string, std::string> table = {
#include "z340_digests.inc"
    };
    return table;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path);
    out << content;
    if (!out) throw FormatError("short write: " + path);
}

// Collects the run record while a command executes and saves it at the end
// when the user asked for one.
struct ManifestSink {
    RunManifest manifest;
    std::string path;

    void input(const std::string& file) {
        if (!path.empty()) manifest.add_input(file);
    }
    void output(const std::string& file) {
        if (!path.empty()) manifest.add_output(file);
    }
    void cfg(const std::string& k, const std::string& v) {
        if (!path.empty()) manifest.config[k] = v;
    }
    void save() const {
        if (!path.empty()) manifest.save(path);
    }
};

struct Ctx {
    uint64_t seed = 1;
    int jobs = 0;
    std::string data_dir = "data";
    ManifestSink sink;
};

// Emits to stdout unless an output path was given; files are recorded in the
// manifest.
void emit(Ctx& ctx, const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
        ctx.sink.output(out_path);
    }
}

SymbolGrid load_grid_arg(Ctx& ctx, const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return SymbolGrid::parse(buffer.str());
    }
    SymbolGrid grid = load_cipher_file(path);
    ctx.sink.input(path);
    return grid;
}

std::pair<int, int> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw FormatError("range must look like 2..170: " + text);
    try {
        size_t used = 0;
        int lo = std::stoi(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument(text);
        std::string rest = text.substr(dots + 2);
        int hi = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::exception&) {
        throw FormatError("range must look like 2..170: " + text);
    }
}

std::string decode_row(const std::string& cells, const SubstitutionKey& key) {
    std::string out;
    out.reserve(cells.size());
    for (char s : cells) out.push_back(key.covers(s) ? key.lookup(s) : '?');
    return out;
}

// ---------------------------------------------------------------------------
// stats / scan-periods / shuffle-test

struct StatsArgs {
    std::string cipher;
    std::vector<int> periods;
    std::string scan;
    int trials = 0;
    bool pivots = false;
    bool csv = false;
    std::string out;
};

int cmd_stats(Ctx& ctx, const StatsArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.cipher);
    std::vector<RepeatReport> reports;
    for (int p : a.periods) reports.push_back(repeating_bigram_count(grid, p));
    if (!a.scan.empty()) {
        auto [lo, hi] = parse_range(a.scan);
        auto scan = period_scan(grid, lo, hi);
        reports.insert(reports.end(), scan.begin(), scan.end());
    }
    std::vector<ShuffleBaseline> baselines;
    if (a.trials > 0) {
        for (int p : a.periods) baselines.push_back(shuffle_baseline(grid, p, a.trials, ctx.seed));
    }
    std::vector<PivotPattern> pivots = pivot_search(grid);
    if (!a.pivots) {
        // keep the pair count in the report but drop per-pivot detail
        std::vector<PivotPattern> counted = std::move(pivots);
        pivots.clear();
        std::string text = a.csv ? scan_report_csv(reports)
                                 : stats_report_json(grid, reports, baselines, counted);
        if (!a.csv) {
            emit(ctx, text, a.out);
            return 0;
        }
        emit(ctx, text, a.out);
        return 0;
    }
    std::string text =
        a.csv ? scan_report_csv(reports) : stats_report_json(grid, reports, baselines, pivots);
    emit(ctx, text, a.out);
    return 0;
}

struct ScanArgs {
    std::string cipher;
    int min = 2;
    int max = 0;
    bool csv = false;
    std::string out;
};

int cmd_scan_periods(Ctx& ctx, const ScanArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.cipher);
    int hi = a.max > 0 ? a.max : grid.size() / 2;
    auto scan = period_scan(grid, a.min, hi);
    emit(ctx, a.csv ? scan_report_csv(scan) : scan_report_json(scan), a.out);
    return 0;
}

struct ShuffleArgs {
    std::string cipher;
    int period = 1;
    int trials = 100000;
    std::string out;
};

int cmd_shuffle_test(Ctx& ctx, const ShuffleArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.cipher);
    ShuffleBaseline baseline = shuffle_baseline(grid, a.period, a.trials, ctx.seed);
    emit(ctx, shuffle_report_json(baseline), a.out);
    return 0;
}

// ---------------------------------------------------------------------------
// transpose

struct TransposeArgs {
    std::string cipher;
    std::string spec_file;
    std::string line;
    bool invert_flag = false;
    std::string out;
};

int cmd_transpose(Ctx& ctx, const TransposeArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.cipher);
    Reordering reordering;
    if (!a.spec_file.empty()) {
        reordering = load_spec_file(a.spec_file);
        ctx.sink.input(a.spec_file);
    } else if (!a.line.empty()) {
        reordering = Reordering::from_spec(TranspositionSpec::parse_line(a.line));
    } else {
        throw FormatError("transpose needs --spec FILE or --line \"<spec>\"");
    }
    if (a.invert_flag) reordering = invert(reordering, grid.rows(), grid.cols());
    SymbolGrid out = apply(grid, reordering);
    emit(ctx, out.serialize(), a.out);
    return 0;
}

// ---------------------------------------------------------------------------
// segment

struct SegmentArgs {
    std::string text;
    std::string file;
    std::string words;
    std::string out;
};

int cmd_segment(Ctx& ctx, const SegmentArgs& a) {
    std::string words_path = a.words.empty() ? (fs::path(ctx.data_dir) / "wordlist.txt").string()
                                             : a.words;
    WordModel model = WordModel::load_file(words_path);
    ctx.sink.input(words_path);
    std::string input = a.text;
    if (!a.file.empty()) {
        input = read_text_file(a.file);
        ctx.sink.input(a.file);
        while (!input.empty() && (input.back() == '\n' || input.back() == '\r')) input.pop_back();
    }
    if (input.empty()) throw FormatError("segment needs TEXT or --file");
    emit(ctx, model.segment(input) + "\n", a.out);
    return 0;
}

// ---------------------------------------------------------------------------
// build-model

struct BuildModelArgs {
    std::string corpus;
    std::string from_tsv;
    int order = 5;
    std::string out;
    std::string counts_tsv;
};

int cmd_build_model(Ctx& ctx, const BuildModelArgs& a) {
    if (a.out.empty()) throw FormatError("build-model needs --out FILE");
    NGramCounts counts;
    std::string provenance;
    if (!a.from_tsv.empty()) {
        std::ifstream in(a.from_tsv, std::ios::binary);
        if (!in) throw FormatError("cannot read file: " + a.from_tsv);
        counts = parse_ngram_tsv(in);
        ctx.sink.input(a.from_tsv);
        provenance = fs::path(a.from_tsv).filename().string();
    } else if (!a.corpus.empty()) {
        std::ifstream in(a.corpus, std::ios::binary);
        if (!in) throw FormatError("cannot read file: " + a.corpus);
        counts = count_ngrams(in, a.order);
        ctx.sink.input(a.corpus);
        provenance = fs::path(a.corpus).filename().string() + " order " + std::to_string(a.order);
    } else {
        throw FormatError("build-model needs --corpus FILE or --from-tsv FILE");
    }
    if (!a.counts_tsv.empty()) {
        std::ofstream out(a.counts_tsv, std::ios::binary);
        if (!out) throw FormatError("cannot write file: " + a.counts_tsv);
        write_ngram_tsv(out, counts);
        out.close();
        ctx.sink.output(a.counts_tsv);
    }
    NGramModel model = NGramModel::from_counts(counts, provenance);
    model.save_cache(a.out);
    ctx.sink.output(a.out);
    std::cerr << "model order " << model.order() << ", " << model.stored()
              << " stored n-grams -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// solve / enumerate-and-solve

struct SolveArgs {
    std::string cipher;
    std::string model;
    std::string cribs;
    double lambda = 0.1;
    int iterations = 200000;
    int restarts = 5;
    double t0 = 0.0;
    double decay = 0.0;
    std::string mode = "linear";
    double min_score = -1e300;
    bool has_min_score = false;
    std::string out;
};

SolverConfig solver_config(Ctx& ctx, const SolveArgs& a) {
    SolverConfig config;
    config.lambda = a.lambda;
    config.iterations = a.iterations;
    config.restarts = a.restarts;
    config.t0 = a.t0;
    config.decay = a.decay;
    config.seed = ctx.seed;
    config.jobs = ctx.jobs;
    if (a.mode == "linear") {
        config.mode = ScoreMode::linear;
    } else if (a.mode == "per-row") {
        config.mode = ScoreMode::per_row;
    } else {
        throw FormatError("--mode must be linear or per-row");
    }
    if (!a.cribs.empty()) {
        config.cribs = load_crib_file(a.cribs);
        ctx.sink.input(a.cribs);
    }
    ctx.sink.cfg("lambda", std::to_string(a.lambda));
    ctx.sink.cfg("iterations", std::to_string(a.iterations));
    ctx.sink.cfg("restarts", std::to_string(a.restarts));
    ctx.sink.cfg("mode", a.mode);
    return config;
}

int cmd_solve(Ctx& ctx, const SolveArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.cipher);
    NGramModel model = NGramModel::load_file(a.model);
    ctx.sink.input(a.model);
    SolverConfig config = solver_config(ctx, a);
    CandidateSolution best = solve(grid, model, config);
    emit(ctx, solve_report_json({best}), a.out);
    return (a.has_min_score && best.score < a.min_score) ? 1 : 0;
}

struct EnumArgs {
    SolveArgs solve;
    std::string plan_space;
    int sieve = 0;
    int top = 0;
    std::string checkpoint;
    bool csv = false;
};

ordered_json entry_to_json(size_t index, const BatchEntry& e) {
    ordered_json j;
    j["index"] = index;
    j["plan"] = e.plan_id;
    j["failed"] = e.failed;
    if (e.failed) {
        j["error"] = e.error;
    } else {
        j["score"] = e.best.score;
        j["ngram"] = e.best.ngram;
        j["entropy"] = e.best.entropy;
        j["seed"] = e.best.seed;
        j["restart"] = e.best.restart;
        j["plaintext"] = e.best.plaintext;
        std::vector<std::string> key;
        for (char s : e.best.key.coverage())
            key.push_back(std::string(1, s) + "=" + std::string(1, e.best.key.lookup(s)));
        j["key"] = key;
    }
    return j;
}

BatchEntry entry_from_json(const json& j) {
    BatchEntry e;
    e.plan_id = j.at("plan").get<std::string>();
    e.failed = j.at("failed").get<bool>();
    if (e.failed) {
        e.error = j.at("error").get<std::string>();
        return e;
    }
    e.best.score = j.at("score").get<double>();
    e.best.ngram = j.at("ngram").get<double>();
    e.best.entropy = j.at("entropy").get<double>();
    e.best.seed = j.at("seed").get<uint64_t>();
    e.best.restart = j.at("restart").get<int>();
    e.best.plaintext = j.at("plaintext").get<std::string>();
    std::string key_text;
    for (const auto& pair : j.at("key")) key_text += pair.get<std::string>() + "\n";
    e.best.key = SubstitutionKey::parse(key_text);
    e.best.plan_id = e.plan_id;
    return e;
}

int cmd_enumerate_and_solve(Ctx& ctx, const EnumArgs& a) {
    SymbolGrid grid = load_grid_arg(ctx, a.solve.cipher);
    std::string space_text = read_text_file(a.plan_space);
    ctx.sink.input(a.plan_space);
    PlanSpace space = PlanSpace::parse(space_text, fs::path(a.plan_space).parent_path().string());
    NGramModel model = NGramModel::load_file(a.solve.model);
    ctx.sink.input(a.solve.model);
    SolverConfig config = solver_config(ctx, a.solve);

    std::vector<std::pair<std::string, SymbolGrid>> variants;
    EnumerationStats stats =
        enumerate_variants(grid, space, a.sieve, [&](const VariantResult& v) {
            variants.emplace_back(v.plan_id, apply(grid, v.reordering));
            return true;
        });
    std::cerr << "plan space: " << stats.yielded << " variants kept, " << stats.rejected
              << " rejected\n";

    std::vector<BatchEntry> entries;
    if (a.checkpoint.empty()) {
        entries = batch_solve(variants, model, config);
    } else {
        // Re-runs skip variants already in the checkpoint; each variant keeps
        // its enumeration-order seed, so a resumed run reports exactly what
        // an uninterrupted one would.
        std::map<size_t, BatchEntry> done;
        if (fs::exists(a.checkpoint)) {
            std::istringstream in(read_text_file(a.checkpoint));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                json j = json::parse(line, nullptr, false);
                if (j.is_discarded()) throw FormatError("malformed checkpoint line");
                size_t index = j.at("index").get<size_t>();
                if (index >= variants.size() ||
                    j.at("plan").get<std::string>() != variants[index].first)
                    throw FormatError("checkpoint does not match this plan space");
                done[index] = entry_from_json(j);
            }
        }
        std::ofstream ck(a.checkpoint, std::ios::app | std::ios::binary);
        if (!ck) throw FormatError("cannot write checkpoint: " + a.checkpoint);
        for (size_t v = 0; v < variants.size(); ++v) {
            auto it = done.find(v);
            if (it != done.end()) {
                entries.push_back(it->second);
                continue;
            }
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
            ck << entry_to_json(v, entry).dump() << "\n";
            ck.flush();
            entries.push_back(std::move(entry));
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const BatchEntry& x, const BatchEntry& y) {
                             if (x.failed != y.failed) return !x.failed;
                             if (x.failed) return false;
                             return x.best.score > y.best.score;
                         });
        ctx.sink.output(a.checkpoint);
    }

    emit(ctx, a.csv ? batch_report_csv(entries, a.top) : batch_report_json(entries),
         a.solve.out);
    bool found = !entries.empty() && !entries.front().failed;
    if (a.solve.has_min_score)
        found = found && entries.front().best.score >= a.solve.min_score;
    return found ? 0 : 1;
}

// ---------------------------------------------------------------------------
// generate-suite

struct SuiteArgs {
    int count = 100;
    int length = 340;
    int budget = 63;
    std::string policy = "cyclic";
    std::string profile;
    std::string corpus;
    std::string out_dir;
};

int cmd_generate_suite(Ctx& ctx, const SuiteArgs& a) {
    if (a.out_dir.empty()) throw FormatError("generate-suite needs --out-dir DIR");
    GeneratorSpec spec;
    spec.length = a.length;
    spec.budget = a.budget;
    spec.seed = ctx.seed;
    if (a.policy == "cyclic") {
        spec.policy = HomophoneTable::Policy::cyclic;
    } else if (a.policy == "random") {
        spec.policy = HomophoneTable::Policy::seeded_random;
    } else {
        throw FormatError("--policy must be cyclic or random");
    }
    if (!a.profile.empty()) {
        spec.profile = load_cipher_file(a.profile);
        ctx.sink.input(a.profile);
    }
    std::string corpus_path =
        a.corpus.empty() ? (fs::path(ctx.data_dir) / "corpus.txt").string() : a.corpus;
    std::string corpus = read_text_file(corpus_path);
    ctx.sink.input(corpus_path);
    ctx.sink.cfg("count", std::to_string(a.count));
    ctx.sink.cfg("length", std::to_string(a.length));
    ctx.sink.cfg("budget", std::to_string(a.budget));
    ctx.sink.cfg("policy", a.policy);

    std::vector<GeneratedCipher> suite = generate_suite(spec, a.count, corpus);
    fs::create_directories(a.out_dir);
    std::string manifest_lines;
    for (int i = 0; i < a.count; ++i) {
        char tag[16];
        std::snprintf(tag, sizeof(tag), "%04d", i);
        fs::path cipher_path = fs::path(a.out_dir) / (std::string("cipher_") + tag + ".txt");
        fs::path key_path = fs::path(a.out_dir) / (std::string("key_") + tag + ".txt");
        fs::path plain_path = fs::path(a.out_dir) / (std::string("plain_") + tag + ".txt");
        write_text_file(cipher_path.string(), suite[(size_t)i].grid.serialize());
        write_text_file(key_path.string(), suite[(size_t)i].key.serialize());
        write_text_file(plain_path.string(), suite[(size_t)i].plaintext + "\n");
        ordered_json line;
        line["index"] = i;
        line["seed"] = derive_stream(ctx.seed, (uint64_t)i);
        line["cipher"] = cipher_path.generic_string();
        line["key"] = key_path.generic_string();
        line["plaintext"] = plain_path.generic_string();
        line["cipher_sha256"] = file_digest(cipher_path.string());
        line["key_sha256"] = file_digest(key_path.string());
        line["plaintext_sha256"] = file_digest(plain_path.string());
        manifest_lines += line.dump() + "\n";
    }
    fs::path manifest_path = fs::path(a.out_dir) / "manifest.jsonl";
    write_text_file(manifest_path.string(), manifest_lines);
    ctx.sink.output(manifest_path.string());
    std::cerr << "wrote " << a.count << " ciphers to " << a.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reproduce-z340

struct ReproduceArgs {
    bool raw = false;
    bool no_corrections = false;
    std::string key_name = "refined";
    int section = 0;
    bool json_out = false;
    std::string out;
};

struct PresToken {
    std::string t;  // letters as they sit in the transposed stream
    std::string c;  // assumed correction, empty when the word is sound
    std::string d;  // display override (punctuation), empty otherwise
    bool rev = false;
};

std::vector<PresToken> parse_tokens(const json& arr) {
    std::vector<PresToken> tokens;
    for (const auto& tj : arr) {
        PresToken tok;
        tok.t = tj.at("t").get<std::string>();
        if (tj.contains("c")) tok.c = tj.at("c").get<std::string>();
        if (tj.contains("d")) tok.d = tj.at("d").get<std::string>();
        if (tj.contains("rev")) tok.rev = tj.at("rev").get<bool>();
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::string token_display(const PresToken& tok) {
    if (!tok.d.empty()) return tok.d;
    if (tok.rev) return std::string(tok.t.rbegin(), tok.t.rend());
    return tok.t;
}

std::string render_tokens(const std::vector<PresToken>& tokens, bool raw) {
    std::string out;
    for (const auto& tok : tokens) {
        if (!out.empty()) out += ' ';
        std::string shown = token_display(tok);
        if (tok.c.empty()) {
            out += shown;
        } else if (raw) {
            out += "[" + shown + ": " + tok.c + "]";
        } else {
            out += tok.c;
        }
    }
    return out;
}

std::string concat_raw(const std::vector<PresToken>& tokens) {
    std::string out;
    for (const auto& tok : tokens) out += tok.t;
    return out;
}

int cmd_reproduce_z340(Ctx& ctx, const ReproduceArgs& a) {
    if (a.key_name != "refined" && a.key_name != "initial")
        throw FormatError("--key must be initial or refined");
    bool refined = a.key_name == "refined";

    auto need = [&](const std::string& name) -> std::string {
        fs::path p = fs::path(ctx.data_dir) / name;
        if (!fs::exists(p)) throw FormatError("missing bundled data file: " + p.string());
        std::string digest = file_digest(p.string());
        auto it = data_digests().find(name);
        if (it != data_digests().end() && it->second != digest)
            throw IntegrityError("bundled data file was modified: " + p.string());
        ctx.sink.input(p.string());
        return read_text_file(p.string());
    };

    SymbolGrid grid = SymbolGrid::parse(need("z340.txt"));
    SubstitutionKey key = SubstitutionKey::parse(
        need(refined ? "z340_key_refined.txt" : "z340_key_initial.txt"));
    std::string plan_name = refined ? "z340_final_plan.spec" : "z340_initial_plan.spec";
    Reordering reordering = Reordering::parse(need(plan_name));
    if (!reordering.plan) throw IntegrityError("bundled plan is not a section plan: " + plan_name);
    json pres = json::parse(need("z340_presentation.json"));

    SectionPlan plan = *reordering.plan;
    if (a.no_corrections) {
        for (auto& rules : plan.disruptions) {
            std::erase_if(rules, [](const DisruptionRule& r) {
                return r.kind == DisruptionRule::Kind::circular_right_shift;
            });
        }
    }

    SymbolGrid out = apply(grid, plan);
    std::string text = decrypt(out, key, '?');
    if (text.find('?') != std::string::npos)
        throw IntegrityError("bundled key does not cover the bundled cipher");

    // Section spans in the output, and the excluded cells inside them.
    std::vector<int> excluded;
    for (const auto& rules : plan.disruptions) {
        for (const auto& rule : rules) {
            if (rule.kind != DisruptionRule::Kind::exclude_cells) continue;
            for (auto [r, c] : rule.cells) excluded.push_back(r * grid.cols() + c);
        }
    }
    std::sort(excluded.begin(), excluded.end());
    std::vector<std::string> sections;
    std::string life_is;
    int row_offset = 0;
    for (int size : plan.sizes) {
        int begin = row_offset * grid.cols();
        int end = (row_offset + size) * grid.cols();
        std::string body;
        for (int pos = begin; pos < end; ++pos) {
            if (std::binary_search(excluded.begin(), excluded.end(), pos)) {
                life_is += text[(size_t)pos];
            } else {
                body += text[(size_t)pos];
            }
        }
        sections.push_back(std::move(body));
        row_offset += size;
    }

    // The corrected row, shown before and after its circular shift.
    std::string row_before, row_after;
    int shift_row = -1;
    for (const auto& rules : reordering.plan->disruptions) {
        for (const auto& rule : rules) {
            if (rule.kind != DisruptionRule::Kind::circular_right_shift) continue;
            shift_row = rule.row;
            std::string cells = grid.row(rule.row);
            row_before = decode_row(cells, key);
            std::string shifted = cells;
            int width = rule.col_last - rule.col_first + 1;
            for (int k = 0; k < width; ++k) {
                int from = rule.col_first + ((k - rule.amount) % width + width) % width;
                shifted[(size_t)(rule.col_first + k)] = cells[(size_t)from];
            }
            row_after = decode_row(shifted, key);
        }
    }

    // Rendered forms. The curated tokenization only describes the corrected
    // pipelines; without corrections the sections are shown as letter runs.
    std::string rendered, rendered_raw;
    std::string placement = "none";
    if (!life_is.empty()) placement = a.no_corrections ? "in_place" : "tail";
    if (refined && !a.no_corrections) {
        auto s1 = parse_tokens(pres.at("final").at("section1"));
        auto s2 = parse_tokens(pres.at("final").at("section2"));
        auto tail = parse_tokens(pres.at("final").at("tail"));
        const auto& life = pres.at("final").at("life_is");
        size_t life_slot = life.at("before_tail_index").get<size_t>();
        if (concat_raw(s1) != sections[0] || concat_raw(s2) != sections[1] ||
            concat_raw(tail) != sections[2] + sections[3] ||
            life.at("t").get<std::string>() != life_is || life_slot > tail.size())
            throw IntegrityError("presentation tokens do not match the decoded text");
        auto render_all = [&](bool raw_mode) {
            std::string txt = render_tokens(s1, raw_mode);
            txt += " " + render_tokens(s2, raw_mode);
            std::vector<PresToken> tail_with_life = tail;
            PresToken life_token;
            life_token.t = life_is;
            life_token.d = life.at("d").get<std::string>();
            tail_with_life.insert(tail_with_life.begin() + (long)life_slot, life_token);
            txt += " " + render_tokens(tail_with_life, raw_mode);
            return txt;
        };
        rendered = render_all(false);
        rendered_raw = render_all(true);
        if (a.section == 1) rendered = rendered_raw = render_tokens(s1, a.raw);
        if (a.section == 2) rendered = rendered_raw = render_tokens(s2, a.raw);
        if (a.section == 3 || a.section == 4)
            rendered = rendered_raw = sections[(size_t)(a.section - 1)];
    } else if (!refined) {
        const auto& listed = pres.at("initial").at("sections");
        std::vector<std::vector<std::string>> words(4);
        for (size_t i = 0; i < 4; ++i)
            words[i] = listed.at(i).get<std::vector<std::string>>();
        if (!a.no_corrections) {
            for (size_t i = 0; i < 4; ++i) {
                std::string joined;
                for (const auto& w : words[i]) joined += w;
                if (joined != sections[i])
                    throw IntegrityError("presentation tokens do not match the decoded text");
            }
        }
        auto join_words = [&](size_t i) {
            std::string txt;
            for (const auto& w : words[i]) {
                if (!txt.empty()) txt += ' ';
                txt += w;
            }
            return txt;
        };
        if (a.section >= 1) {
            rendered = a.no_corrections ? sections[(size_t)(a.section - 1)]
                                        : join_words((size_t)(a.section - 1));
        } else {
            for (size_t i = 0; i < 4; ++i) {
                if (!rendered.empty()) rendered += "\n";
                rendered += a.no_corrections ? sections[i] : join_words(i);
            }
        }
        rendered_raw = rendered;
    } else {
        // refined key without corrections: plain section letters
        if (a.section >= 1) {
            rendered = sections[(size_t)(a.section - 1)];
        } else {
            for (size_t i = 0; i < 4; ++i) {
                if (!rendered.empty()) rendered += "\n";
                rendered += sections[i];
            }
            if (!life_is.empty()) rendered += "\nexcluded: " + life_is;
        }
        rendered_raw = rendered;
    }
    if (a.section < 0 || a.section > 4) throw FormatError("--section must be 1..4");

    if (a.json_out) {
        ordered_json j;
        j["key"] = a.key_name;
        j["plan"] = plan_name;
        j["corrections"] = !a.no_corrections;
        j["sections"] = sections;
        j["life_is"] = life_is;
        j["life_is_placement"] = placement;
        if (shift_row >= 0) {
            j["row_shift"] = {{"row", shift_row + 1},
                              {"before", row_before},
                              {"after", row_after},
                              {"applied", !a.no_corrections}};
        }
        j["text"] = rendered;
        j["raw_text"] = rendered_raw;
        emit(ctx, j.dump(2) + "\n", a.out);
    } else {
        emit(ctx, (a.raw ? rendered_raw : rendered) + "\n", a.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homophonic and transposition cipher analysis toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Ctx ctx;
    app.add_option("--seed", ctx.seed, "Seed for every random draw")->capture_default_str();
    app.add_option("--jobs", ctx.jobs, "Worker threads (0 = library default)")
        ->capture_default_str();
    app.add_option("--data-dir", ctx.data_dir, "Bundled data directory")->capture_default_str();
    app.add_option("--manifest", ctx.sink.path, "Write a run manifest to this file");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Ciphertext statistics report");
    stats->add_option("cipher", stats_args.cipher, "Cipher file ('-' for stdin)")->required();
    stats->add_option("--period", stats_args.periods, "Report repeats at this period");
    stats->add_option("--scan", stats_args.scan, "Also scan a period range, e.g. 2..170");
    stats->add_option("--trials", stats_args.trials, "Shuffle-baseline trials per period");
    stats->add_flag("--pivots", stats_args.pivots, "Include per-pivot detail");
    stats->add_flag("--csv", stats_args.csv, "CSV period table instead of JSON");
    stats->add_option("-o,--out", stats_args.out, "Write to file instead of stdout");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan-periods", "Repeat counts over a period range");
    scan->add_option("cipher", scan_args.cipher, "Cipher file ('-' for stdin)")->required();
    scan->add_option("--min", scan_args.min, "First period")->capture_default_str();
    scan->add_option("--max", scan_args.max, "Last period (0 = half the length)")
        ->capture_default_str();
    scan->add_flag("--csv", scan_args.csv, "CSV instead of JSON");
    scan->add_option("-o,--out", scan_args.out, "Write to file instead of stdout");

    ShuffleArgs shuffle_args;
    auto* shuffle = app.add_subcommand("shuffle-test", "Monte Carlo repeat baseline");
    shuffle->add_option("cipher", shuffle_args.cipher, "Cipher file ('-' for stdin)")->required();
    shuffle->add_option("--period", shuffle_args.period, "Period under test")
        ->capture_default_str();
    shuffle->add_option("--trials", shuffle_args.trials, "Shuffle count")->capture_default_str();
    shuffle->add_option("-o,--out", shuffle_args.out, "Write to file instead of stdout");

    TransposeArgs transpose_args;
    auto* transpose = app.add_subcommand("transpose", "Reorder a cipher grid");
    transpose->add_option("cipher", transpose_args.cipher, "Cipher file ('-' for stdin)")
        ->required();
    transpose->add_option("--spec", transpose_args.spec_file, "Spec or plan file");
    transpose->add_option("--line", transpose_args.line, "Inline spec, e.g. 'decimation n=1 m=2'");
    transpose->add_flag("--invert", transpose_args.invert_flag, "Apply the inverse reordering");
    transpose->add_option("-o,--out", transpose_args.out, "Write to file instead of stdout");

    SegmentArgs segment_args;
    auto* segment = app.add_subcommand("segment", "Insert word boundaries into letter text");
    segment->add_option("text", segment_args.text, "Text to segment");
    segment->add_option("--file", segment_args.file, "Read the text from a file");
    segment->add_option("--words", segment_args.words, "Word list (default data dir wordlist)");
    segment->add_option("-o,--out", segment_args.out, "Write to file instead of stdout");

    BuildModelArgs build_args;
    auto* build = app.add_subcommand("build-model", "Build an n-gram model cache");
    build->add_option("--corpus", build_args.corpus, "Corpus text file");
    build->add_option("--from-tsv", build_args.from_tsv, "Existing KGRAM<TAB>count file");
    build->add_option("--order", build_args.order, "N-gram order")->capture_default_str();
    build->add_option("--out", build_args.out, "Cache file to write")->required();
    build->add_option("--counts-tsv", build_args.counts_tsv, "Also write the raw counts");

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Anneal a substitution key");
    solve_cmd->add_option("cipher", solve_args.cipher, "Cipher file ('-' for stdin)")->required();
    solve_cmd->add_option("--model", solve_args.model, "N-gram model file")->required();
    solve_cmd->add_option("--cribs", solve_args.cribs, "Crib file");
    solve_cmd->add_option("--lambda", solve_args.lambda, "Entropy weight")->capture_default_str();
    solve_cmd->add_option("--iterations", solve_args.iterations, "Annealing steps per restart")
        ->capture_default_str();
    solve_cmd->add_option("--restarts", solve_args.restarts, "Independent restarts")
        ->capture_default_str();
    solve_cmd->add_option("--t0", solve_args.t0, "Initial temperature (0 = calibrate)");
    solve_cmd->add_option("--decay", solve_args.decay, "Cooling factor (0 = default)");
    solve_cmd->add_option("--mode", solve_args.mode, "Scoring mode: linear or per-row")
        ->capture_default_str();
    auto* min_score_opt =
        solve_cmd->add_option("--min-score", solve_args.min_score, "Exit 1 below this score");
    solve_cmd->add_option("-o,--out", solve_args.out, "Write to file instead of stdout");

    EnumArgs enum_args;
    auto* enumerate = app.add_subcommand("enumerate-and-solve",
                                         "Solve every variant in a transposition plan space");
    enumerate->add_option("cipher", enum_args.solve.cipher, "Cipher file ('-' for stdin)")
        ->required();
    enumerate->add_option("--plan-space", enum_args.plan_space, "Plan space file")->required();
    enumerate->add_option("--model", enum_args.solve.model, "N-gram model file")->required();
    enumerate->add_option("--cribs", enum_args.solve.cribs, "Crib file");
    enumerate->add_option("--sieve", enum_args.sieve, "Minimum period-1 repeats to keep")
        ->capture_default_str();
    enumerate->add_option("--top", enum_args.top, "Rows in the CSV report (0 = all)")
        ->capture_default_str();
    enumerate->add_option("--checkpoint", enum_args.checkpoint, "Resumable progress file");
    enumerate->add_option("--lambda", enum_args.solve.lambda, "Entropy weight")
        ->capture_default_str();
    enumerate->add_option("--iterations", enum_args.solve.iterations,
                          "Annealing steps per restart")
        ->capture_default_str();
    enumerate->add_option("--restarts", enum_args.solve.restarts, "Independent restarts")
        ->capture_default_str();
    enumerate->add_option("--t0", enum_args.solve.t0, "Initial temperature (0 = calibrate)");
    enumerate->add_option("--decay", enum_args.solve.decay, "Cooling factor (0 = default)");
    enumerate->add_option("--mode", enum_args.solve.mode, "Scoring mode: linear or per-row")
        ->capture_default_str();
    auto* enum_min_score = enumerate->add_option("--min-score", enum_args.solve.min_score,
                                                 "Exit 1 below this score");
    enumerate->add_flag("--csv", enum_args.csv, "CSV table instead of JSON");
    enumerate->add_option("-o,--out", enum_args.solve.out, "Write to file instead of stdout");

    SuiteArgs suite_args;
    auto* suite = app.add_subcommand("generate-suite", "Generate test ciphers with ground truth");
    suite->add_option("--count", suite_args.count, "Number of ciphers")->capture_default_str();
    suite->add_option("--length", suite_args.length, "Cipher length")->capture_default_str();
    suite->add_option("--budget", suite_args.budget, "Symbol budget")->capture_default_str();
    suite->add_option("--policy", suite_args.policy, "Homophone policy: cyclic or random")
        ->capture_default_str();
    suite->add_option("--profile", suite_args.profile, "Reference cipher whose profile to copy");
    suite->add_option("--corpus", suite_args.corpus, "Corpus file (default data dir corpus)");
    suite->add_option("--out-dir", suite_args.out_dir, "Output directory")->required();

    ReproduceArgs repro_args;
    auto* repro = app.add_subcommand("reproduce-z340", "Replay the Z340 decipherment");
    repro->add_flag("--raw", repro_args.raw, "Keep misspellings, bracketing the corrections");
    repro->add_flag("--no-corrections", repro_args.no_corrections,
                    "Skip the row shift and show sections as decoded");
    repro->add_option("--key", repro_args.key_name, "Key stage: initial or refined")
        ->capture_default_str();
    repro->add_option("--section", repro_args.section, "Print one section (1-4)");
    repro->add_flag("--json", repro_args.json_out, "Structured report");
    repro->add_option("-o,--out", repro_args.out, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef ZKIT_HAVE_OPENMP
    if (ctx.jobs > 0) omp_set_num_threads(ctx.jobs);
#endif

    solve_args.has_min_score = min_score_opt->count() > 0;
    enum_args.solve.has_min_score = enum_min_score->count() > 0;

    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) command += ' ';
        command += argv[i];
    }
    ctx.sink.manifest.command = command;
    ctx.sink.manifest.tool_version = kVersion;
    ctx.sink.manifest.seed = ctx.seed;

    try {
        int code = 0;
        if (app.got_subcommand(stats)) code = cmd_stats(ctx, stats_args);
        else if (app.got_subcommand(scan)) code = cmd_scan_periods(ctx, scan_args);
        else if (app.got_subcommand(shuffle)) code = cmd_shuffle_test(ctx, shuffle_args);
        else if (app.got_subcommand(transpose)) code = cmd_transpose(ctx, transpose_args);
        else if (app.got_subcommand(segment)) code = cmd_segment(ctx, segment_args);
        else if (app.got_subcommand(build)) code = cmd_build_model(ctx, build_args);
        else if (app.got_subcommand(solve_cmd)) code = cmd_solve(ctx, solve_args);
        else if (app.got_subcommand(enumerate)) code = cmd_enumerate_and_solve(ctx, enum_args);
        else if (app.got_subcommand(suite)) code = cmd_generate_suite(ctx, suite_args);
        else if (app.got_subcommand(repro)) code = cmd_reproduce_z340(ctx, repro_args);
        ctx.sink.save();
        return code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
