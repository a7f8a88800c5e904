#pragma once

#include <cstdint>
#include <string>

#include "zkit/grid.hpp"
#include "zkit/key.hpp"

namespace zkit {

// Replaces every cell by its mapped letter. Symbols without a mapping become
// unknown_marker; partial keys are the normal intermediate state during
// cribbing, so this is not an error. Output length equals grid size.
std::string decrypt(const SymbolGrid& grid, const SubstitutionKey& key, char unknown_marker = '?');

// Enciphers plaintext with a homophone table. With the cyclic policy the
// i-th occurrence of letter L uses list[L][(i-1) mod len]; with seeded_random
// each occurrence picks uniformly from the list using the seed. The result is
// deterministic given (table policy, seed). Throws CoverageError when a
// plaintext letter has no homophones.
std::string encrypt_sequence(const std::string& plaintext, const HomophoneTable& table, uint64_t seed = 0);

// Same, shaped into a rows x cols grid. plaintext length must equal rows*cols.
SymbolGrid encrypt(const std::string& plaintext, const HomophoneTable& table, int rows, int cols,
                   uint64_t seed = 0);

}  // namespace zkit
