#pragma once

#include <array>
#include <string>

namespace zkit {

// Ordered set of distinct symbol tokens. Each token is one printable
// character in the transcription format. Iteration order is the insertion
// order of first appearance, which keeps symbol ids stable across runs.
class Alphabet {
public:
    Alphabet() { index_.fill(-1); }

    // Adds a symbol if it is not present yet. Returns its index.
    int add(char symbol) {
        int& slot = index_[(unsigned char)symbol];
        if (slot < 0) {
            slot = (int)symbols_.size();
            symbols_.push_back(symbol);
        }
        return slot;
    }

    // Index of a symbol, or -1 when absent.
    int index(char symbol) const { return index_[(unsigned char)symbol]; }

    bool contains(char symbol) const { return index(symbol) >= 0; }

    char at(int idx) const { return symbols_[(size_t)idx]; }

    int size() const { return (int)symbols_.size(); }

    // Symbols in insertion order.
    const std::string& symbols() const { return symbols_; }

private:
    std::string symbols_;
    std::array<int, 256> index_;
};

}  // namespace zkit
