#include "zkit/generator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "zkit/cipher.hpp"
#include "zkit/errors.hpp"
#include "zkit/rng.hpp"

namespace zkit {

namespace {

std::array<int, 26> letter_frequencies(const std::string& letters) {
    std::array<int, 26> freq{};
    for (char c : letters) {
        if (c < 'A' || c > 'Z')
            throw PreconditionError("plaintext must be normalized to A-Z");
        freq[c - 'A']++;
    }
    return freq;
}

// Ciphertext symbols drawn from printable ASCII, skipping '#' (cipher file
// comment marker), '=' (key file separator) and '?' (decrypt unknown marker).
std::string symbol_pool() {
    std::string pool;
    for (int c = 33; c <= 126; ++c) {
        if (c == '#' || c == '=' || c == '?') continue;
        pool.push_back(static_cast<char>(c));
    }
    return pool;
}

// Per-symbol occurrence counts produced by a cyclic assignment: a letter with
// f occurrences and k homophones loads symbol j with f/k + (j < f%k).
std::vector<int> cyclic_counts(const std::map<char, int>& allocation,
                               const std::array<int, 26>& freq) {
    std::vector<int> counts;
    for (const auto& [letter, k] : allocation) {
        int f = freq[letter - 'A'];
        for (int j = 0; j < k; ++j) counts.push_back(f / k + (j < f % k ? 1 : 0));
    }
    std::sort(counts.begin(), counts.end(), std::greater<int>());
    return counts;
}

std::string sample_from_letters(const std::string& letters, int length, uint64_t seed) {
    if (length < 0) throw PreconditionError("excerpt length must be non-negative");
    if (length == 0) return "";
    if (static_cast<int>(letters.size()) < length)
        throw PreconditionError("corpus shorter than the requested excerpt");
    Rng rng(seed);
    uint64_t span = letters.size() - static_cast<size_t>(length) + 1;
    return letters.substr(static_cast<size_t>(rng.below(span)), static_cast<size_t>(length));
}

GeneratedCipher generate_from_letters(const GeneratorSpec& spec, const std::string& corpus_letters) {
    std::string plaintext = spec.plaintext;
    if (plaintext.empty()) {
        plaintext = sample_from_letters(corpus_letters, spec.length, derive_stream(spec.seed, 1));
    } else if (spec.length > 0 && spec.length != static_cast<int>(plaintext.size())) {
        if (static_cast<int>(plaintext.size()) < spec.length)
            throw PreconditionError("explicit plaintext shorter than the target length");
        plaintext.resize(static_cast<size_t>(spec.length));
    }
    if (plaintext.empty()) throw PreconditionError("generator needs a non-empty plaintext");
    auto freq = letter_frequencies(plaintext);

    std::map<char, int> allocation = spec.allocation;
    if (allocation.empty()) {
        allocation = spec.profile ? profile_allocation(plaintext, *spec.profile)
                                  : proportional_allocation(plaintext, spec.budget);
    }
    for (int l = 0; l < 26; ++l) {
        if (freq[l] > 0 && !allocation.count(static_cast<char>('A' + l)))
            throw CoverageError(std::string("allocation misses letter ") +
                                static_cast<char>('A' + l));
    }

    std::string pool = symbol_pool();
    int needed = 0;
    for (const auto& [letter, k] : allocation) {
        if (k < 1) throw PreconditionError("allocation entries must be positive");
        needed += k;
    }
    if (needed > static_cast<int>(pool.size()))
        throw PreconditionError("allocation exceeds the available symbol pool");

    HomophoneTable table(spec.policy);
    size_t next = 0;
    for (const auto& [letter, k] : allocation) {
        table.add(letter, pool.substr(next, static_cast<size_t>(k)));
        next += static_cast<size_t>(k);
    }

    int n = static_cast<int>(plaintext.size());
    int cols = spec.cols;
    if (cols == 0) cols = (n % 17 == 0) ? 17 : n;
    if (cols < 1 || n % cols != 0)
        throw PreconditionError("plaintext length is not a multiple of the column count");

    SymbolGrid grid = encrypt(plaintext, table, n / cols, cols, derive_stream(spec.seed, 2));
    return GeneratedCipher{grid, table.inverse_key(), plaintext};
}

}  // namespace

std::string normalize_letters(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (std::isalpha(c)) out.push_back(static_cast<char>(std::toupper(c)));
    }
    return out;
}

std::string sample_plaintext(const std::string& corpus, int length, uint64_t seed) {
    return sample_from_letters(normalize_letters(corpus), length, seed);
}

std::map<char, int> proportional_allocation(const std::string& plaintext, int budget) {
    auto freq = letter_frequencies(plaintext);
    int n = static_cast<int>(plaintext.size());
    int distinct = 0;
    for (int f : freq) distinct += (f > 0);
    if (distinct == 0) throw PreconditionError("plaintext has no letters to allocate for");
    if (budget < distinct)
        throw PreconditionError("symbol budget smaller than the distinct letter count");

    std::map<char, int> alloc;
    std::array<double, 26> quota{};
    int assigned = 0;
    for (int l = 0; l < 26; ++l) {
        if (freq[l] == 0) continue;
        quota[l] = static_cast<double>(freq[l]) * budget / n;
        int k = std::max(1, static_cast<int>(quota[l]));
        alloc[static_cast<char>('A' + l)] = k;
        assigned += k;
    }
    // Largest-remainder repair towards the exact budget; ties break on the
    // earlier letter so the result is deterministic.
    while (assigned != budget) {
        char pick = 0;
        double pick_gap = 0.0;
        for (const auto& [letter, k] : alloc) {
            double gap = quota[letter - 'A'] - k;
            if (assigned < budget) {
                if (pick == 0 || gap > pick_gap) { pick = letter; pick_gap = gap; }
            } else {
                if (k > 1 && (pick == 0 || gap < pick_gap)) { pick = letter; pick_gap = gap; }
            }
        }
        if (pick == 0) throw PreconditionError("symbol budget smaller than the distinct letter count");
        alloc[pick] += (assigned < budget) ? 1 : -1;
        assigned += (assigned < budget) ? 1 : -1;
    }
    return alloc;
}

std::vector<int> frequency_profile(const SymbolGrid& grid) {
    std::map<char, int> counts;
    for (char c : grid.cells()) counts[c]++;
    std::vector<int> profile;
    profile.reserve(counts.size());
    for (const auto& [symbol, count] : counts) profile.push_back(count);
    std::sort(profile.begin(), profile.end(), std::greater<int>());
    return profile;
}

long long profile_distance(const std::vector<int>& a, const std::vector<int>& b) {
    long long d = 0;
    size_t m = std::max(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        int x = i < a.size() ? a[i] : 0;
        int y = i < b.size() ? b[i] : 0;
        d += std::abs(x - y);
    }
    return d;
}

std::map<char, int> profile_allocation(const std::string& plaintext, const SymbolGrid& reference) {
    auto target = frequency_profile(reference);
    auto freq = letter_frequencies(plaintext);
    auto alloc = proportional_allocation(plaintext, static_cast<int>(target.size()));

    // First-improvement descent over single homophone transfers between two
    // letters, scoring the profile a cyclic assignment would produce.
    long long best = profile_distance(cyclic_counts(alloc, freq), target);
    bool improved = true;
    while (improved) {
        improved = false;
        for (auto& [from, from_k] : alloc) {
            if (from_k <= 1) continue;
            for (auto& [to, to_k] : alloc) {
                if (from == to) continue;
                --from_k;
                ++to_k;
                long long d = profile_distance(cyclic_counts(alloc, freq), target);
                if (d < best) {
                    best = d;
                    improved = true;
                } else {
                    ++from_k;
                    --to_k;
                }
                if (from_k <= 1) break;
            }
            if (improved) break;
        }
    }
    return alloc;
}

GeneratedCipher generate(const GeneratorSpec& spec, const std::string& corpus) {
    std::string letters;
    if (spec.plaintext.empty()) letters = normalize_letters(corpus);
    return generate_from_letters(spec, letters);
}

std::vector<GeneratedCipher> generate_suite_serial(const GeneratorSpec& spec, int count,
                                                   const std::string& corpus) {
    if (count < 0) throw PreconditionError("suite count must be non-negative");
    std::string letters;
    if (spec.plaintext.empty()) letters = normalize_letters(corpus);
    std::vector<GeneratedCipher> suite;
    suite.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        GeneratorSpec item = spec;
        item.seed = derive_stream(spec.seed, static_cast<uint64_t>(i));
        suite.push_back(generate_from_letters(item, letters));
    }
    return suite;
}

std::vector<GeneratedCipher> generate_suite(const GeneratorSpec& spec, int count,
                                            const std::string& corpus) {
#ifdef ZKIT_HAVE_OPENMP
    if (count < 0) throw PreconditionError("suite count must be non-negative");
    std::string letters;
    if (spec.plaintext.empty()) letters = normalize_letters(corpus);
    std::vector<std::optional<GeneratedCipher>> slots(static_cast<size_t>(count));
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            GeneratorSpec item = spec;
            item.seed = derive_stream(spec.seed, static_cast<uint64_t>(i));
            slots[static_cast<size_t>(i)] = generate_from_letters(item, letters);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<GeneratedCipher> suite;
    suite.reserve(static_cast<size_t>(count));
    for (auto& slot : slots) suite.push_back(std::move(*slot));
    return suite;
#else
    return generate_suite_serial(spec, count, corpus);
#endif
}

}  // namespace zkit
