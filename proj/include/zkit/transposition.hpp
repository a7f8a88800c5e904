#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zkit/grid.hpp"

namespace zkit {

// A read-out order: a permutation of linear cell indices (0-based). Applying
// it produces output cell k = input cell order[k].
struct CellOrder {
    std::vector<int> order;

    bool is_permutation() const;
    CellOrder inverted() const;
};

// Declarative description of one reordering of grid cells.
//
// Spec file line format: "kind param=value ...", for example
//   decimation n=1 m=2
//   period p=19
//   move_column from=17 to=1   (1-indexed columns)
//   explicit order=1,3,5,...   (1-indexed cells, used for inverses)
struct TranspositionSpec {
    enum class Kind {
        identity,
        decimation,
        period,
        pseudo_period,
        mirror_horizontal,
        move_column,
        column_period,
        row_major,
        column_major,
        explicit_order,
    };

    Kind kind = Kind::identity;
    int n_step = 0;  // decimation row step
    int m_step = 0;  // decimation column step
    int p = 0;       // period / pseudo_period / column_period parameter
    int from = 0;    // move_column source, 0-based
    int to = 0;      // move_column destination, 0-based
    std::vector<int> order;  // explicit_order payload, 0-based

    static TranspositionSpec parse_line(const std::string& line);
    std::string serialize() const;
};

// Correction rules applied to one section around its reorder.
struct DisruptionRule {
    enum class Kind { exclude_cells, circular_right_shift };

    Kind kind = Kind::exclude_cells;
    // exclude_cells: absolute 0-based (row, col) cells. They are skipped by
    // the read-out and keep their original positions in the output.
    std::vector<std::pair<int, int>> cells;
    // circular_right_shift: absolute 0-based row, inclusive column range,
    // applied to the source section before reordering.
    int row = 0;
    int col_first = 0;
    int col_last = 0;
    int amount = 0;
};

// Split of the grid into contiguous sections along one axis, with one spec
// and optional disruption rules per section. The sections are reordered
// independently and concatenated in order.
struct SectionPlan {
    enum class Axis { horizontal, vertical };

    Axis axis = Axis::horizontal;
    std::vector<int> sizes;
    std::vector<TranspositionSpec> specs;
    std::vector<std::vector<DisruptionRule>> disruptions;

    // Plan file lines, with 1-indexed section numbers, rows and columns:
    //   axis horizontal
    //   sizes 9 9 1 1
    //   section 1 decimation n=1 m=2
    //   disrupt 2 rshift row=15 cols=4..17 amount=1
    //   disrupt 2 exclude 10,12 10,13
    static SectionPlan parse(const std::string& text);
    std::string serialize() const;
};

// A reordering that is either a single spec or a section plan.
struct Reordering {
    std::optional<TranspositionSpec> spec;
    std::optional<SectionPlan> plan;

    static Reordering from_spec(TranspositionSpec s);
    static Reordering from_plan(SectionPlan p);
    // Plan files start with an "axis" line; anything else is a single spec
    // line (comments and blank lines allowed in both).
    static Reordering parse(const std::string& text);
    std::string serialize() const;
};

// Doubly periodic grid enumeration: visits (n*k mod N, m*k mod M) for
// k = 0..N*M-1. Improper parameter combinations (the steps must be coprime
// to their dimensions, and the dimensions to each other) revisit cells and
// raise SpecError.
CellOrder decimation_order(int rows, int cols, int n_step, int m_step);

// Chain concatenation per the period-p algorithm: positions 1, 1+p, 1+2p,
// ... then 2, 2+p, ... (1-indexed; the result is 0-based).
CellOrder pseudo_period_order(int n, int p);

// Single-cycle linear decimation: visits (p*k mod n). Requires gcd(p, n) = 1.
CellOrder period_order(int n, int p);

// Columns reordered by a period-p decimation of the column index; rows stay
// in place. Requires gcd(p, cols) = 1.
CellOrder column_period_order(int rows, int cols, int p);

// Repeated "down one, right two" moves with wraparound from the top-left
// cell. Equals decimation_order(rows, cols, 1, 2) where defined; throws
// CoverageError when the walk revisits a cell before covering the grid.
CellOrder knight_walk_order(int rows, int cols);

// Read-out order of a spec or plan for the given dimensions, disruptions
// included.
CellOrder order_of(const TranspositionSpec& spec, int rows, int cols);
CellOrder order_of(const SectionPlan& plan, int rows, int cols);
CellOrder order_of(const Reordering& reordering, int rows, int cols);

// Applies a reordering; the output has the same dimensions and cell multiset.
SymbolGrid apply(const SymbolGrid& grid, const TranspositionSpec& spec);
SymbolGrid apply(const SymbolGrid& grid, const SectionPlan& plan);
SymbolGrid apply(const SymbolGrid& grid, const Reordering& reordering);

// Inverse reordering for the given dimensions:
// apply(apply(g, r), invert(r, rows, cols)) == g. Identity inverts to
// itself; everything else becomes an explicit order spec.
Reordering invert(const Reordering& reordering, int rows, int cols);

// All ordered compositions of extent into 1..max_sections positive parts,
// shortest first, lexicographic within a length.
std::vector<std::vector<int>> enumerate_splits(int extent, int max_sections);

// Finite plan family: explicitly included plans, then every composition of
// the split axis into at most max_sections parts with one spec choice
// applied uniformly to all sections.
struct PlanSpace {
    SectionPlan::Axis axis = SectionPlan::Axis::horizontal;
    int max_sections = 1;
    std::vector<TranspositionSpec> spec_choices;
    std::vector<std::pair<std::string, Reordering>> included;  // (id, plan)

    // File lines: "axis horizontal", "max_sections 3", "choice <spec line>",
    // "include <path relative to the file>".
    static PlanSpace parse(const std::string& text, const std::string& base_dir);
    size_t size(int extent) const;
};

struct VariantResult {
    Reordering reordering;
    std::string plan_id;
    int period1_repeats = 0;
};

struct EnumerationStats {
    size_t yielded = 0;
    size_t rejected = 0;
};

// Walks the plan space in deterministic order, reordering the grid by each
// variant and passing those whose period-1 repeat count reaches the sieve
// to the callback. Returning false stops the stream early; yielded plus
// rejected equals the space size when it runs to completion.
EnumerationStats enumerate_variants(const SymbolGrid& grid, const PlanSpace& space,
                                    int sieve_min_repeats,
                                    const std::function<bool(const VariantResult&)>& callback);

// Mechanical construction equivalent to writing the section by columns and
// mirror-moving the wrapped diagonal triangles: the output is the
// arrangement whose (1,2)-decimation read-out restores the input text.
// Supported for dimensions with 2*rows = 1 (mod cols), such as 9x17.
SymbolGrid triangular_rewrite(const SymbolGrid& section);

Reordering load_spec_file(const std::string& path);

}  // namespace zkit
