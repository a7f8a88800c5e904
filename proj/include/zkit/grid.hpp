#pragma once

#include <string>

#include "zkit/alphabet.hpp"

namespace zkit {

// Rectangular grid of cipher symbols in row-major order. Immutable after
// construction. Linear position j in [1, n] maps to row (j-1)/cols and
// column (j-1) mod cols; the public API uses 0-based indices internally and
// 1-indexed positions only in file formats and reports.
class SymbolGrid {
public:
    SymbolGrid(int rows, int cols, std::string cells);

    // Parses the cipher file format: lines starting with "# " (or a lone
    // '#') are comments, so rows beginning with the '#' symbol still parse.
    // Blank lines are ignored, remaining lines are grid rows of equal length.
    static SymbolGrid parse(const std::string& text);

    // Canonical file form: one row per line, trailing newline, no comments.
    std::string serialize() const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return (int)cells_.size(); }

    char at(int row, int col) const { return cells_[(size_t)(row * cols_ + col)]; }
    char at(int linear) const { return cells_[(size_t)linear]; }

    const std::string& cells() const { return cells_; }
    const Alphabet& alphabet() const { return alphabet_; }

    // Same dimensions, different cell contents.
    SymbolGrid with_cells(std::string cells) const { return SymbolGrid(rows_, cols_, std::move(cells)); }

    // One row as a string.
    std::string row(int r) const { return cells_.substr((size_t)(r * cols_), (size_t)cols_); }

private:
    int rows_;
    int cols_;
    std::string cells_;
    Alphabet alphabet_;
};

// Reads and parses a cipher file from disk.
SymbolGrid load_cipher_file(const std::string& path);

}  // namespace zkit
