#include "zkit/key.hpp"

#include <fstream>
#include <sstream>

#include "zkit/errors.hpp"

namespace zkit {

void SubstitutionKey::set(char symbol, char letter) {
    if (letter < 'A' || letter > 'Z')
        throw PreconditionError(std::string("letter out of range for symbol '") + symbol + "'");
    char& slot = map_[(unsigned char)symbol];
    if (slot == 0) order_.push_back(symbol);
    slot = letter;
}

SubstitutionKey SubstitutionKey::parse(const std::string& text) {
    SubstitutionKey key;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool comment = line == "#" || (line.size() >= 2 && line[0] == '#' && line[1] == ' ');
        if (line.empty() || comment) continue;
        if (line.size() != 3 || line[1] != '=')
            throw FormatError("bad key line " + std::to_string(lineno) + ": expected SYMBOL=LETTER");
        if (key.covers(line[0]))
            throw FormatError("duplicate symbol on key line " + std::to_string(lineno));
        key.set(line[0], line[2]);
    }
    return key;
}

std::string SubstitutionKey::serialize() const {
    std::string out;
    for (char s : order_) {
        out.push_back(s);
        out.push_back('=');
        out.push_back(lookup(s));
        out.push_back('\n');
    }
    return out;
}

void HomophoneTable::add(char letter, std::string symbols) {
    if (symbols.empty()) throw PreconditionError("empty homophone list");
    for (const auto& [other, list] : lists_)
        for (char s : symbols)
            if (list.find(s) != std::string::npos)
                throw PreconditionError(std::string("symbol '") + s + "' already assigned to letter " + other);
    if (lists_.count(letter)) throw PreconditionError(std::string("letter already present: ") + letter);
    lists_[letter] = std::move(symbols);
    letters_.push_back(letter);
}

bool HomophoneTable::covers(char letter) const { return lists_.count(letter) > 0; }

const std::string& HomophoneTable::symbols(char letter) const {
    auto it = lists_.find(letter);
    if (it == lists_.end())
        throw CoverageError(std::string("no homophones for letter ") + letter);
    return it->second;
}

SubstitutionKey HomophoneTable::inverse_key() const {
    SubstitutionKey key;
    for (char letter : letters_)
        for (char s : lists_.at(letter)) key.set(s, letter);
    return key;
}

SubstitutionKey load_key_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open key file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return SubstitutionKey::parse(buf.str());
}

}  // namespace zkit
