#include "zkit/grid.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "zkit/errors.hpp"

namespace zkit {

SymbolGrid::SymbolGrid(int rows, int cols, std::string cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ <= 0 || cols_ <= 0)
        throw PreconditionError("grid dimensions must be positive");
    if ((size_t)(rows_ * cols_) != cells_.size())
        throw PreconditionError("cell count does not match rows*cols");
    for (char c : cells_) alphabet_.add(c);
}

SymbolGrid SymbolGrid::parse(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool comment = line == "#" || (line.size() >= 2 && line[0] == '#' && line[1] == ' ');
        if (line.empty() || comment) continue;
        if (!rows.empty() && line.size() != rows.front().size())
            throw FormatError("ragged row at line " + std::to_string(lineno) + ": expected " +
                              std::to_string(rows.front().size()) + " symbols, got " +
                              std::to_string(line.size()));
        rows.push_back(line);
    }
    if (rows.empty()) throw FormatError("cipher file contains no grid rows");
    std::string cells;
    cells.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) cells += r;
    return SymbolGrid((int)rows.size(), (int)rows.front().size(), std::move(cells));
}

std::string SymbolGrid::serialize() const {
    std::string out;
    out.reserve(cells_.size() + (size_t)rows_);
    for (int r = 0; r < rows_; r++) {
        out.append(cells_, (size_t)(r * cols_), (size_t)cols_);
        out.push_back('\n');
    }
    return out;
}

SymbolGrid load_cipher_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open cipher file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return SymbolGrid::parse(buf.str());
}

}  // namespace zkit
