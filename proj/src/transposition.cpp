#include "zkit/transposition.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "zkit/errors.hpp"
#include "zkit/statistics.hpp"

namespace zkit {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& text, const std::string& context) {
    try {
        size_t used = 0;
        int value = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw FormatError("expected an integer in " + context + ", got '" + text + "'");
    }
}

// Splits "key=value", checking the key.
std::string expect_kv(const std::string& tok, const std::string& key, const std::string& context) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || tok.substr(0, eq) != key)
        throw FormatError("expected " + key + "=... in " + context + ", got '" + tok + "'");
    return tok.substr(eq + 1);
}

int expect_kv_int(const std::string& tok, const std::string& key, const std::string& context) {
    return parse_int(expect_kv(tok, key, context), context);
}

bool meaningful(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return false;
        if (!isspace((unsigned char)ch)) return true;
    }
    return false;
}

std::vector<std::string> meaningful_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (meaningful(line)) out.push_back(line);
    }
    return out;
}

}  // namespace

bool CellOrder::is_permutation() const {
    std::vector<char> seen(order.size(), 0);
    for (int v : order) {
        if (v < 0 || v >= (int)order.size() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

CellOrder CellOrder::inverted() const {
    CellOrder inv;
    inv.order.resize(order.size());
    for (size_t k = 0; k < order.size(); k++) inv.order[(size_t)order[k]] = (int)k;
    return inv;
}

TranspositionSpec TranspositionSpec::parse_line(const std::string& line) {
    auto toks = tokenize(line);
    if (toks.empty()) throw FormatError("empty transposition spec line");
    const std::string& kind = toks[0];
    const std::string ctx = "spec line '" + line + "'";
    auto expect_argc = [&](size_t n) {
        if (toks.size() != n + 1)
            throw FormatError(kind + " takes " + std::to_string(n) + " parameter(s) in " + ctx);
    };
    TranspositionSpec s;
    if (kind == "identity") {
        expect_argc(0);
        s.kind = Kind::identity;
    } else if (kind == "decimation") {
        expect_argc(2);
        s.kind = Kind::decimation;
        s.n_step = expect_kv_int(toks[1], "n", ctx);
        s.m_step = expect_kv_int(toks[2], "m", ctx);
    } else if (kind == "period") {
        expect_argc(1);
        s.kind = Kind::period;
        s.p = expect_kv_int(toks[1], "p", ctx);
    } else if (kind == "pseudo_period") {
        expect_argc(1);
        s.kind = Kind::pseudo_period;
        s.p = expect_kv_int(toks[1], "p", ctx);
    } else if (kind == "mirror_horizontal") {
        expect_argc(0);
        s.kind = Kind::mirror_horizontal;
    } else if (kind == "move_column") {
        expect_argc(2);
        s.kind = Kind::move_column;
        s.from = expect_kv_int(toks[1], "from", ctx) - 1;
        s.to = expect_kv_int(toks[2], "to", ctx) - 1;
    } else if (kind == "column_period") {
        expect_argc(1);
        s.kind = Kind::column_period;
        s.p = expect_kv_int(toks[1], "p", ctx);
    } else if (kind == "row_major") {
        expect_argc(0);
        s.kind = Kind::row_major;
    } else if (kind == "column_major") {
        expect_argc(0);
        s.kind = Kind::column_major;
    } else if (kind == "explicit") {
        expect_argc(1);
        s.kind = Kind::explicit_order;
        std::string payload = expect_kv(toks[1], "order", ctx);
        std::istringstream in(payload);
        std::string item;
        while (std::getline(in, item, ','))
            s.order.push_back(parse_int(item, ctx) - 1);
        if (s.order.empty()) throw FormatError("explicit order is empty in " + ctx);
    } else {
        throw FormatError("unknown transposition kind '" + kind + "'");
    }
    return s;
}

std::string TranspositionSpec::serialize() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::identity: out << "identity"; break;
        case Kind::decimation: out << "decimation n=" << n_step << " m=" << m_step; break;
        case Kind::period: out << "period p=" << p; break;
        case Kind::pseudo_period: out << "pseudo_period p=" << p; break;
        case Kind::mirror_horizontal: out << "mirror_horizontal"; break;
        case Kind::move_column: out << "move_column from=" << from + 1 << " to=" << to + 1; break;
        case Kind::column_period: out << "column_period p=" << p; break;
        case Kind::row_major: out << "row_major"; break;
        case Kind::column_major: out << "column_major"; break;
        case Kind::explicit_order: {
            out << "explicit order=";
            for (size_t k = 0; k < order.size(); k++) out << (k ? "," : "") << order[k] + 1;
            break;
        }
    }
    return out.str();
}

SectionPlan SectionPlan::parse(const std::string& text) {
    SectionPlan plan;
    bool have_axis = false, have_sizes = false;
    for (const std::string& line : meaningful_lines(text)) {
        auto toks = tokenize(line);
        const std::string ctx = "plan line '" + line + "'";
        if (toks[0] == "axis") {
            if (toks.size() != 2) throw FormatError("axis takes one value in " + ctx);
            if (toks[1] == "horizontal") plan.axis = Axis::horizontal;
            else if (toks[1] == "vertical") plan.axis = Axis::vertical;
            else throw FormatError("axis must be horizontal or vertical in " + ctx);
            have_axis = true;
        } else if (toks[0] == "sizes") {
            if (toks.size() < 2) throw FormatError("sizes needs at least one value in " + ctx);
            for (size_t k = 1; k < toks.size(); k++) {
                int v = parse_int(toks[k], ctx);
                if (v < 1) throw FormatError("section sizes must be positive in " + ctx);
                plan.sizes.push_back(v);
            }
            plan.specs.assign(plan.sizes.size(), TranspositionSpec{});
            plan.disruptions.assign(plan.sizes.size(), {});
            have_sizes = true;
        } else if (toks[0] == "section" || toks[0] == "disrupt") {
            if (!have_sizes) throw FormatError("sizes line must precede " + ctx);
            if (toks.size() < 3) throw FormatError(toks[0] + " needs a section number and a body in " + ctx);
            int sec = parse_int(toks[1], ctx) - 1;
            if (sec < 0 || sec >= (int)plan.sizes.size())
                throw FormatError("section number out of range in " + ctx);
            std::string body;
            for (size_t k = 2; k < toks.size(); k++) body += (k > 2 ? " " : "") + toks[k];
            if (toks[0] == "section") {
                plan.specs[(size_t)sec] = TranspositionSpec::parse_line(body);
            } else if (toks[2] == "rshift") {
                if (toks.size() != 6) throw FormatError("rshift takes row=, cols= and amount= in " + ctx);
                DisruptionRule rule;
                rule.kind = DisruptionRule::Kind::circular_right_shift;
                rule.row = expect_kv_int(toks[3], "row", ctx) - 1;
                std::string range = expect_kv(toks[4], "cols", ctx);
                auto dots = range.find("..");
                if (dots == std::string::npos)
                    throw FormatError("cols range must be first..last in " + ctx);
                rule.col_first = parse_int(range.substr(0, dots), ctx) - 1;
                rule.col_last = parse_int(range.substr(dots + 2), ctx) - 1;
                rule.amount = expect_kv_int(toks[5], "amount", ctx);
                if (rule.col_first > rule.col_last)
                    throw FormatError("empty cols range in " + ctx);
                if (rule.amount < 0) throw FormatError("negative shift amount in " + ctx);
                plan.disruptions[(size_t)sec].push_back(rule);
            } else if (toks[2] == "exclude") {
                DisruptionRule rule;
                rule.kind = DisruptionRule::Kind::exclude_cells;
                for (size_t k = 3; k < toks.size(); k++) {
                    auto comma = toks[k].find(',');
                    if (comma == std::string::npos)
                        throw FormatError("exclude cells must be row,col in " + ctx);
                    rule.cells.emplace_back(parse_int(toks[k].substr(0, comma), ctx) - 1,
                                            parse_int(toks[k].substr(comma + 1), ctx) - 1);
                }
                if (rule.cells.empty()) throw FormatError("exclude lists no cells in " + ctx);
                plan.disruptions[(size_t)sec].push_back(rule);
            } else {
                throw FormatError("unknown disruption '" + toks[2] + "' in " + ctx);
            }
        } else {
            throw FormatError("unknown plan directive '" + toks[0] + "'");
        }
    }
    if (!have_axis) throw FormatError("plan has no axis line");
    if (!have_sizes) throw FormatError("plan has no sizes line");
    return plan;
}

std::string SectionPlan::serialize() const {
    std::ostringstream out;
    out << "axis " << (axis == Axis::horizontal ? "horizontal" : "vertical") << "\n";
    out << "sizes";
    for (int v : sizes) out << " " << v;
    out << "\n";
    for (size_t s = 0; s < sizes.size(); s++) {
        out << "section " << s + 1 << " " << specs[s].serialize() << "\n";
        for (const auto& rule : disruptions[s]) {
            if (rule.kind == DisruptionRule::Kind::circular_right_shift) {
                out << "disrupt " << s + 1 << " rshift row=" << rule.row + 1
                    << " cols=" << rule.col_first + 1 << ".." << rule.col_last + 1
                    << " amount=" << rule.amount << "\n";
            } else {
                out << "disrupt " << s + 1 << " exclude";
                for (auto [r, c] : rule.cells) out << " " << r + 1 << "," << c + 1;
                out << "\n";
            }
        }
    }
    return out.str();
}

Reordering Reordering::from_spec(TranspositionSpec s) {
    Reordering r;
    r.spec = std::move(s);
    return r;
}

Reordering Reordering::from_plan(SectionPlan p) {
    Reordering r;
    r.plan = std::move(p);
    return r;
}

Reordering Reordering::parse(const std::string& text) {
    auto lines = meaningful_lines(text);
    if (lines.empty()) throw FormatError("spec file has no content");
    if (tokenize(lines[0])[0] == "axis") return from_plan(SectionPlan::parse(text));
    if (lines.size() > 1) throw FormatError("single-spec file has more than one line");
    return from_spec(TranspositionSpec::parse_line(lines[0]));
}

std::string Reordering::serialize() const {
    if (plan) return plan->serialize();
    return spec->serialize() + "\n";
}

CellOrder decimation_order(int rows, int cols, int n_step, int m_step) {
    if (rows < 1 || cols < 1) throw PreconditionError("decimation needs positive dimensions");
    auto describe = [&] {
        return "(" + std::to_string(n_step) + "," + std::to_string(m_step) + ")-decimation of " +
               std::to_string(rows) + "x" + std::to_string(cols);
    };
    if (std::gcd(n_step, rows) != 1 || std::gcd(m_step, cols) != 1)
        throw SpecError("improper " + describe() + ": some indices will be missed");
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    std::vector<char> seen((size_t)rows * cols, 0);
    long r = 0, c = 0;
    for (int k = 0; k < rows * cols; k++) {
        int cell = (int)(r * cols + c);
        if (seen[(size_t)cell])
            throw SpecError("improper " + describe() + ": some indices will be missed");
        seen[(size_t)cell] = 1;
        result.order.push_back(cell);
        r = (r + n_step) % rows;
        c = (c + m_step) % cols;
    }
    return result;
}

CellOrder pseudo_period_order(int n, int p) {
    if (n < 1) throw PreconditionError("sequence length must be positive");
    if (p < 1 || p > n / 2)
        throw PreconditionError("period must be in [1, " + std::to_string(n / 2) + "], got " +
                                std::to_string(p));
    CellOrder result;
    result.order.reserve((size_t)n);
    for (int start = 0; start < p; start++)
        for (int i = start; i < n; i += p) result.order.push_back(i);
    return result;
}

CellOrder period_order(int n, int p) {
    if (n < 1) throw PreconditionError("sequence length must be positive");
    if (p < 1 || std::gcd(p, n) != 1)
        throw SpecError("period order requires gcd(p, n) = 1, got p=" + std::to_string(p) +
                        ", n=" + std::to_string(n));
    CellOrder result;
    result.order.reserve((size_t)n);
    long pos = 0;
    for (int k = 0; k < n; k++) {
        result.order.push_back((int)pos);
        pos = (pos + p) % n;
    }
    return result;
}

CellOrder column_period_order(int rows, int cols, int p) {
    if (rows < 1 || cols < 1) throw PreconditionError("column period needs positive dimensions");
    if (p < 1 || std::gcd(p, cols) != 1)
        throw SpecError("column period requires gcd(p, cols) = 1, got p=" + std::to_string(p) +
                        ", cols=" + std::to_string(cols));
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    for (int r = 0; r < rows; r++)
        for (long k = 0; k < cols; k++) result.order.push_back((int)(r * cols + (p * k) % cols));
    return result;
}

CellOrder knight_walk_order(int rows, int cols) {
    if (rows < 1 || cols < 1) throw PreconditionError("knight walk needs positive dimensions");
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    std::vector<char> seen((size_t)rows * cols, 0);
    int r = 0, c = 0;
    for (int k = 0; k < rows * cols; k++) {
        int cell = r * cols + c;
        if (seen[(size_t)cell])
            throw CoverageError("knight walk on " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " revisits a cell before covering the grid");
        seen[(size_t)cell] = 1;
        result.order.push_back(cell);
        r = (r + 1) % rows;
        c = (c + 2) % cols;
    }
    return result;
}

namespace {

CellOrder identity_order(int n) {
    CellOrder result;
    result.order.resize((size_t)n);
    std::iota(result.order.begin(), result.order.end(), 0);
    return result;
}

CellOrder mirror_order(int rows, int cols) {
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    for (int r = 0; r < rows; r++)
        for (int c = 0; c < cols; c++) result.order.push_back(r * cols + (cols - 1 - c));
    return result;
}

CellOrder move_column_order(int rows, int cols, int from, int to) {
    if (from < 0 || from >= cols || to < 0 || to >= cols)
        throw SpecError("move_column columns out of range for " + std::to_string(cols) +
                        " columns");
    std::vector<int> seq(cols);
    std::iota(seq.begin(), seq.end(), 0);
    seq.erase(seq.begin() + from);
    seq.insert(seq.begin() + to, from);
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    for (int r = 0; r < rows; r++)
        for (int c = 0; c < cols; c++) result.order.push_back(r * cols + seq[(size_t)c]);
    return result;
}

CellOrder column_major_order(int rows, int cols) {
    CellOrder result;
    result.order.reserve((size_t)rows * cols);
    for (int c = 0; c < cols; c++)
        for (int r = 0; r < rows; r++) result.order.push_back(r * cols + c);
    return result;
}

}  // namespace

CellOrder order_of(const TranspositionSpec& spec, int rows, int cols) {
    int n = rows * cols;
    switch (spec.kind) {
        case TranspositionSpec::Kind::identity:
        case TranspositionSpec::Kind::row_major:
            return identity_order(n);
        case TranspositionSpec::Kind::decimation:
            return decimation_order(rows, cols, spec.n_step, spec.m_step);
        case TranspositionSpec::Kind::period:
            return period_order(n, spec.p);
        case TranspositionSpec::Kind::pseudo_period:
            return pseudo_period_order(n, spec.p);
        case TranspositionSpec::Kind::mirror_horizontal:
            return mirror_order(rows, cols);
        case TranspositionSpec::Kind::move_column:
            return move_column_order(rows, cols, spec.from, spec.to);
        case TranspositionSpec::Kind::column_period:
            return column_period_order(rows, cols, spec.p);
        case TranspositionSpec::Kind::column_major:
            return column_major_order(rows, cols);
        case TranspositionSpec::Kind::explicit_order: {
            CellOrder result;
            result.order = spec.order;
            if ((int)result.order.size() != n || !result.is_permutation())
                throw SpecError("explicit order is not a permutation of " + std::to_string(n) +
                                " cells");
            return result;
        }
    }
    throw SpecError("unhandled transposition kind");
}

CellOrder order_of(const SectionPlan& plan, int rows, int cols) {
    if (plan.sizes.empty()) throw SpecError("plan has no sections");
    int extent = plan.axis == SectionPlan::Axis::horizontal ? rows : cols;
    int total = std::accumulate(plan.sizes.begin(), plan.sizes.end(), 0);
    if (total != extent)
        throw SpecError("section sizes sum to " + std::to_string(total) + ", expected " +
                        std::to_string(extent));
    CellOrder result;
    result.order.assign((size_t)rows * cols, -1);
    int offset = 0;
    for (size_t s = 0; s < plan.sizes.size(); s++) {
        int size = plan.sizes[s];
        int lrows = plan.axis == SectionPlan::Axis::horizontal ? size : rows;
        int lcols = plan.axis == SectionPlan::Axis::horizontal ? cols : size;
        int count = lrows * lcols;
        // absolute linear position of local row-major index
        auto absolute = [&](int local) {
            int lr = local / lcols, lc = local % lcols;
            return plan.axis == SectionPlan::Axis::horizontal
                       ? (offset + lr) * cols + lc
                       : lr * cols + (offset + lc);
        };
        auto local_of = [&](int r, int c) -> int {
            if (plan.axis == SectionPlan::Axis::horizontal) {
                if (r < offset || r >= offset + size || c < 0 || c >= cols) return -1;
                return (r - offset) * lcols + c;
            }
            if (c < offset || c >= offset + size || r < 0 || r >= rows) return -1;
            return r * lcols + (c - offset);
        };
        // source map: shifted[i] = original[source[i]]
        std::vector<int> source((size_t)count);
        std::iota(source.begin(), source.end(), 0);
        std::vector<char> excluded((size_t)count, 0);
        for (const auto& rule : plan.disruptions[s]) {
            if (rule.kind == DisruptionRule::Kind::circular_right_shift) {
                int first = local_of(rule.row, rule.col_first);
                int last = local_of(rule.row, rule.col_last);
                if (first < 0 || last < 0)
                    throw SpecError("shift range lies outside section " + std::to_string(s + 1));
                int width = rule.col_last - rule.col_first + 1;
                std::vector<int> shifted(source);
                for (int k = 0; k < width; k++) {
                    int wrapped = (k - rule.amount % width + width) % width;
                    shifted[(size_t)(first + k)] = source[(size_t)(first + wrapped)];
                }
                source.swap(shifted);
            } else {
                for (auto [r, c] : rule.cells) {
                    int local = local_of(r, c);
                    if (local < 0)
                        throw SpecError("excluded cell " + std::to_string(r + 1) + "," +
                                        std::to_string(c + 1) + " lies outside section " +
                                        std::to_string(s + 1));
                    excluded[(size_t)local] = 1;
                }
            }
        }
        CellOrder local = order_of(plan.specs[s], lrows, lcols);
        std::vector<int> stream;
        stream.reserve((size_t)count);
        for (int k = 0; k < count; k++)
            if (!excluded[(size_t)local.order[k]]) stream.push_back(source[(size_t)local.order[k]]);
        size_t next = 0;
        for (int i = 0; i < count; i++) {
            int src = excluded[(size_t)i] ? source[(size_t)i] : stream[next++];
            result.order[(size_t)absolute(i)] = absolute(src);
        }
        offset += size;
    }
    return result;
}

CellOrder order_of(const Reordering& reordering, int rows, int cols) {
    if (reordering.plan) return order_of(*reordering.plan, rows, cols);
    if (reordering.spec) return order_of(*reordering.spec, rows, cols);
    throw SpecError("empty reordering");
}

namespace {

SymbolGrid apply_order(const SymbolGrid& grid, const CellOrder& order) {
    std::string cells((size_t)grid.size(), ' ');
    for (int k = 0; k < grid.size(); k++) cells[(size_t)k] = grid.at(order.order[(size_t)k]);
    return grid.with_cells(std::move(cells));
}

}  // namespace

SymbolGrid apply(const SymbolGrid& grid, const TranspositionSpec& spec) {
    return apply_order(grid, order_of(spec, grid.rows(), grid.cols()));
}

SymbolGrid apply(const SymbolGrid& grid, const SectionPlan& plan) {
    return apply_order(grid, order_of(plan, grid.rows(), grid.cols()));
}

SymbolGrid apply(const SymbolGrid& grid, const Reordering& reordering) {
    return apply_order(grid, order_of(reordering, grid.rows(), grid.cols()));
}

Reordering invert(const Reordering& reordering, int rows, int cols) {
    CellOrder forward = order_of(reordering, rows, cols);
    CellOrder inverse = forward.inverted();
    if (std::is_sorted(inverse.order.begin(), inverse.order.end()))
        return Reordering::from_spec(TranspositionSpec{});
    TranspositionSpec spec;
    spec.kind = TranspositionSpec::Kind::explicit_order;
    spec.order = std::move(inverse.order);
    return Reordering::from_spec(std::move(spec));
}

std::vector<std::vector<int>> enumerate_splits(int extent, int max_sections) {
    if (extent < 1) throw PreconditionError("extent must be positive");
    if (max_sections < 1) throw PreconditionError("max_sections must be at least 1");
    std::vector<std::vector<int>> out;
    std::vector<int> parts;
    auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(parts);
            return;
        }
        if ((int)parts.size() == max_sections) return;
        for (int v = 1; v <= remaining; v++) {
            parts.push_back(v);
            self(self, remaining - v);
            parts.pop_back();
        }
    };
    rec(rec, extent);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

PlanSpace PlanSpace::parse(const std::string& text, const std::string& base_dir) {
    PlanSpace space;
    bool have_axis = false;
    for (const std::string& line : meaningful_lines(text)) {
        auto toks = tokenize(line);
        const std::string ctx = "plan-space line '" + line + "'";
        if (toks[0] == "axis") {
            if (toks.size() != 2) throw FormatError("axis takes one value in " + ctx);
            if (toks[1] == "horizontal") space.axis = SectionPlan::Axis::horizontal;
            else if (toks[1] == "vertical") space.axis = SectionPlan::Axis::vertical;
            else throw FormatError("axis must be horizontal or vertical in " + ctx);
            have_axis = true;
        } else if (toks[0] == "max_sections") {
            if (toks.size() != 2) throw FormatError("max_sections takes one value in " + ctx);
            space.max_sections = parse_int(toks[1], ctx);
            if (space.max_sections < 1)
                throw FormatError("max_sections must be at least 1 in " + ctx);
        } else if (toks[0] == "choice") {
            std::string body;
            for (size_t k = 1; k < toks.size(); k++) body += (k > 1 ? " " : "") + toks[k];
            space.spec_choices.push_back(TranspositionSpec::parse_line(body));
        } else if (toks[0] == "include") {
            if (toks.size() != 2) throw FormatError("include takes one path in " + ctx);
            std::filesystem::path path(toks[1]);
            if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
            space.included.emplace_back(std::filesystem::path(toks[1]).stem().string(),
                                        load_spec_file(path.string()));
        } else {
            throw FormatError("unknown plan-space directive '" + toks[0] + "'");
        }
    }
    if (!have_axis && !space.spec_choices.empty())
        throw FormatError("plan space with choices needs an axis line");
    return space;
}

size_t PlanSpace::size(int extent) const {
    if (spec_choices.empty()) return included.size();
    return included.size() + enumerate_splits(extent, max_sections).size() * spec_choices.size();
}

EnumerationStats enumerate_variants(const SymbolGrid& grid, const PlanSpace& space,
                                    int sieve_min_repeats,
                                    const std::function<bool(const VariantResult&)>& callback) {
    EnumerationStats stats;
    auto consider = [&](Reordering reordering, std::string id) -> bool {
        int repeats;
        try {
            SymbolGrid out = apply(grid, reordering);
            repeats = sequence_repeats(out.cells(), 1);
        } catch (const SpecError&) {
            // A variant its spec cannot realize on these dimensions cannot
            // meet any sieve; it counts as rejected.
            stats.rejected++;
            return true;
        }
        if (repeats < sieve_min_repeats) {
            stats.rejected++;
            return true;
        }
        stats.yielded++;
        return callback({std::move(reordering), std::move(id), repeats});
    };
    for (const auto& [id, reordering] : space.included)
        if (!consider(reordering, id)) return stats;
    if (space.spec_choices.empty()) return stats;
    int extent = space.axis == SectionPlan::Axis::horizontal ? grid.rows() : grid.cols();
    for (const auto& split : enumerate_splits(extent, space.max_sections)) {
        for (const auto& choice : space.spec_choices) {
            SectionPlan plan;
            plan.axis = space.axis;
            plan.sizes = split;
            plan.specs.assign(split.size(), choice);
            plan.disruptions.assign(split.size(), {});
            std::ostringstream id;
            id << (space.axis == SectionPlan::Axis::horizontal ? "h" : "v");
            for (size_t k = 0; k < split.size(); k++) id << (k ? "+" : "") << split[k];
            id << "/" << choice.serialize();
            if (!consider(Reordering::from_plan(std::move(plan)), id.str())) return stats;
        }
    }
    return stats;
}

SymbolGrid triangular_rewrite(const SymbolGrid& section) {
    int n = section.rows(), m = section.cols();
    if ((2 * n) % m != 1 % m)
        throw SpecError("triangular rewrite unsupported for " + std::to_string(n) + "x" +
                        std::to_string(m) + ": needs 2*rows = 1 (mod cols)");
    std::string cells((size_t)section.size(), ' ');
    for (int t = 0; t < m; t++)
        for (int r = 0; r < n; r++)
            cells[(size_t)(r * m + (t + 2 * r) % m)] = section.at(n * t + r);
    return section.with_cells(std::move(cells));
}

Reordering load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return Reordering::parse(buf.str());
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace zkit
