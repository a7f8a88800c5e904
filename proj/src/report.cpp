#include "zkit/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace zkit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json period_json(const RepeatReport& r) {
    ordered_json j;
    j["period"] = r.period;
    j["total_repeats"] = r.total_repeats;
    j["distinct_repeating"] = r.distinct_repeating;
    return j;
}

ordered_json baseline_json(const ShuffleBaseline& b) {
    ordered_json j;
    j["period"] = b.period;
    j["trials"] = b.trials;
    j["seed"] = b.seed;
    j["observed"] = b.observed;
    j["mean"] = b.mean;
    j["stddev"] = b.stddev;
    j["z"] = b.z;
    return j;
}

ordered_json key_json(const SubstitutionKey& key) {
    ordered_json j = ordered_json::array();
    for (char symbol : key.coverage()) {
        j.push_back(std::string(1, symbol) + "=" + std::string(1, key.lookup(symbol)));
    }
    return j;
}

ordered_json candidate_json(const CandidateSolution& c) {
    ordered_json j;
    if (!c.plan_id.empty()) j["plan"] = c.plan_id;
    j["score"] = c.score;
    j["ngram"] = c.ngram;
    j["entropy"] = c.entropy;
    j["seed"] = c.seed;
    j["restart"] = c.restart;
    j["plaintext"] = c.plaintext;
    j["key"] = key_json(c.key);
    return j;
}

std::string csv_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

}  // namespace

std::string stats_report_json(const SymbolGrid& grid,
                              const std::vector<RepeatReport>& periods,
                              const std::vector<ShuffleBaseline>& baselines,
                              const std::vector<PivotPattern>& pivots) {
    ordered_json j;
    j["rows"] = grid.rows();
    j["cols"] = grid.cols();
    j["length"] = grid.size();
    j["symbols"] = static_cast<int>(grid.alphabet().size());
    j["index_of_coincidence"] = index_of_coincidence(grid);
    j["multiplicity"] = multiplicity(grid);
    RowRepeatReport rows = row_repeat_analysis(grid);
    j["row_repeats"] = rows.per_row;
    j["clean_rows"] = rows.clean_rows;
    j["periods"] = ordered_json::array();
    for (const auto& r : periods) j["periods"].push_back(period_json(r));
    if (!baselines.empty()) {
        j["baselines"] = ordered_json::array();
        for (const auto& b : baselines) j["baselines"].push_back(baseline_json(b));
    }
    j["pivot_pairs"] = static_cast<int>(pivots.size());
    if (!pivots.empty()) {
        j["pivots"] = ordered_json::array();
        for (const auto& p : pivots) {
            ordered_json pj;
            pj["vertical_dir"] = p.vertical_dir;
            pj["horizontal_dir"] = p.horizontal_dir;
            pj["first"] = {{"row", p.first.corner_row},
                           {"col", p.first.corner_col},
                           {"trigram", p.first.trigram}};
            pj["second"] = {{"row", p.second.corner_row},
                            {"col", p.second.corner_col},
                            {"trigram", p.second.trigram}};
            j["pivots"].push_back(pj);
        }
    }
    return j.dump(2) + "\n";
}

std::string scan_report_csv(const std::vector<RepeatReport>& scan) {
    std::string out = "period,total_repeats,distinct_repeating\n";
    for (const auto& r : scan) {
        out += std::to_string(r.period) + "," + std::to_string(r.total_repeats) + "," +
               std::to_string(r.distinct_repeating) + "\n";
    }
    return out;
}

std::string scan_report_json(const std::vector<RepeatReport>& scan) {
    ordered_json j = ordered_json::array();
    for (const auto& r : scan) j.push_back(period_json(r));
    return j.dump(2) + "\n";
}

std::string shuffle_report_json(const ShuffleBaseline& baseline) {
    return baseline_json(baseline).dump(2) + "\n";
}

std::string solve_report_json(const std::vector<CandidateSolution>& candidates) {
    ordered_json j = ordered_json::array();
    for (const auto& c : candidates) j.push_back(candidate_json(c));
    return j.dump(2) + "\n";
}

std::string batch_report_json(const std::vector<BatchEntry>& entries) {
    ordered_json j = ordered_json::array();
    for (const auto& e : entries) {
        if (e.failed) {
            ordered_json ej;
            ej["plan"] = e.plan_id;
            ej["failed"] = true;
            ej["error"] = e.error;
            j.push_back(ej);
        } else {
            ordered_json ej = candidate_json(e.best);
            ej["plan"] = e.plan_id;
            j.push_back(ej);
        }
    }
    return j.dump(2) + "\n";
}

std::string batch_report_csv(const std::vector<BatchEntry>& entries, int top_k) {
    std::string out = "rank,plan,score,ngram,entropy,plaintext\n";
    int rank = 0;
    for (const auto& e : entries) {
        if (e.failed) continue;
        ++rank;
        if (top_k > 0 && rank > top_k) break;
        out += std::to_string(rank) + "," + e.plan_id + "," + csv_number(e.best.score) + "," +
               csv_number(e.best.ngram) + "," + csv_number(e.best.entropy) + "," +
               e.best.plaintext + "\n";
    }
    return out;
}

}  // namespace zkit
