#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zkit/grid.hpp"
#include "zkit/key.hpp"

namespace zkit {

// Uppercases ASCII letters and drops every other character.
std::string normalize_letters(const std::string& text);

// Contiguous excerpt of the normalized corpus at a seed-chosen offset.
// Throws PreconditionError when the corpus is shorter than `length`.
std::string sample_plaintext(const std::string& corpus, int length, uint64_t seed);

// Splits `budget` homophones across the letters of `plaintext` proportionally
// to their frequencies, by largest remainder, at least one per letter.
// Throws PreconditionError when the budget cannot cover the distinct letters.
std::map<char, int> proportional_allocation(const std::string& plaintext, int budget);

// Homophone counts tuned so that a cyclic assignment over `plaintext` comes
// close to the sorted symbol-frequency profile of `reference`.
std::map<char, int> profile_allocation(const std::string& plaintext, const SymbolGrid& reference);

// Symbol occurrence counts of a grid, sorted descending.
std::vector<int> frequency_profile(const SymbolGrid& grid);

// L1 distance between two profiles; the shorter one is padded with zeros.
long long profile_distance(const std::vector<int>& a, const std::vector<int>& b);

struct GeneratorSpec {
    int length = 340;
    int budget = 63;                   // symbol count when the allocation is derived
    std::map<char, int> allocation;    // explicit homophone counts; wins over profile
    std::optional<SymbolGrid> profile; // reference grid whose profile to imitate
    HomophoneTable::Policy policy = HomophoneTable::Policy::cyclic;
    std::string plaintext;             // explicit text; empty samples from the corpus
    int cols = 0;                      // 0 picks 17 when divisible, else a single row
    uint64_t seed = 1;
};

struct GeneratedCipher {
    SymbolGrid grid;
    SubstitutionKey key;
    std::string plaintext;
};

// Builds one cipher with its ground-truth key and plaintext. `corpus` is raw
// text (normalized internally) and may be empty when the spec carries its own
// plaintext. decrypt(grid, key) reproduces the returned plaintext.
GeneratedCipher generate(const GeneratorSpec& spec, const std::string& corpus = "");

// Suite of `count` ciphers; item i runs on derive_stream(spec.seed, i), so the
// suite is reproducible and items are independent of each other.
std::vector<GeneratedCipher> generate_suite(const GeneratorSpec& spec, int count,
                                            const std::string& corpus = "");
std::vector<GeneratedCipher> generate_suite_serial(const GeneratorSpec& spec, int count,
                                                   const std::string& corpus = "");

}  // namespace zkit
