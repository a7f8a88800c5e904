#include "zkit/cipher.hpp"

#include <array>

#include "zkit/errors.hpp"
#include "zkit/rng.hpp"

namespace zkit {

std::string decrypt(const SymbolGrid& grid, const SubstitutionKey& key, char unknown_marker) {
    std::string out;
    out.reserve((size_t)grid.size());
    for (char s : grid.cells()) {
        char letter = key.lookup(s);
        out.push_back(letter ? letter : unknown_marker);
    }
    return out;
}

std::string encrypt_sequence(const std::string& plaintext, const HomophoneTable& table, uint64_t seed) {
    std::array<int, 26> occurrence{};
    Rng rng(derive_stream(seed, 0x656e63ull));
    std::string out;
    out.reserve(plaintext.size());
    for (char letter : plaintext) {
        if (letter < 'A' || letter > 'Z')
            throw PreconditionError("plaintext must be uppercase A-Z");
        const std::string& list = table.symbols(letter);
        size_t pick;
        if (table.policy() == HomophoneTable::Policy::cyclic) {
            pick = (size_t)(occurrence[letter - 'A']++ % (int)list.size());
        } else {
            pick = (size_t)rng.below(list.size());
        }
        out.push_back(list[pick]);
    }
    return out;
}

SymbolGrid encrypt(const std::string& plaintext, const HomophoneTable& table, int rows, int cols,
                   uint64_t seed) {
    if ((size_t)(rows * cols) != plaintext.size())
        throw PreconditionError("plaintext length does not match rows*cols");
    return SymbolGrid(rows, cols, encrypt_sequence(plaintext, table, seed));
}

}  // namespace zkit
