#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zkit {

// Many-to-one map from cipher symbols to plaintext letters A-Z. Homophonic:
// several symbols may share a letter, each symbol maps to at most one letter.
class SubstitutionKey {
public:
    SubstitutionKey() { map_.fill(0); }

    // Assigns or reassigns a symbol. letter must be in A-Z.
    void set(char symbol, char letter);

    // Mapped letter, or 0 when the symbol is unmapped.
    char lookup(char symbol) const { return map_[(unsigned char)symbol]; }

    bool covers(char symbol) const { return lookup(symbol) != 0; }

    // Symbols with a mapping, in file/insertion order.
    const std::string& coverage() const { return order_; }

    size_t size() const { return order_.size(); }

    // Key file format: lines "SYMBOL=LETTER". "# " comment lines are
    // allowed; the line "#=X" assigns the '#' symbol itself.
    static SubstitutionKey parse(const std::string& text);
    std::string serialize() const;

private:
    std::array<char, 256> map_;
    std::string order_;
};

// Ordered homophone lists per letter, plus the policy used to pick among
// them during encipherment.
class HomophoneTable {
public:
    enum class Policy { cyclic, seeded_random };

    explicit HomophoneTable(Policy policy = Policy::cyclic) : policy_(policy) {}

    // Registers the symbol list for a letter. Lists must be pairwise disjoint
    // across letters and non-empty.
    void add(char letter, std::string symbols);

    Policy policy() const { return policy_; }
    void set_policy(Policy p) { policy_ = p; }

    bool covers(char letter) const;
    const std::string& symbols(char letter) const;
    const std::vector<char>& letters() const { return letters_; }

    // The decryption key implied by the table (symbol -> letter).
    SubstitutionKey inverse_key() const;

private:
    Policy policy_;
    std::map<char, std::string> lists_;
    std::vector<char> letters_;
};

SubstitutionKey load_key_file(const std::string& path);

}  // namespace zkit
