#pragma once

#include <stdexcept>
#include <string>

namespace zkit {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or stream (ragged rows, bad key lines, bad spec text).
class FormatError : public Error {
public:
    using Error::Error;
};

// An operation precondition was violated (period out of range, empty input).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A transposition spec or plan is invalid for the target grid.
class SpecError : public Error {
public:
    using Error::Error;
};

// Two cribs (or a crib and itself) force one symbol onto two letters.
class ConflictError : public Error {
public:
    ConflictError(const std::string& what, char symbol, int position_a, int position_b)
        : Error(what), symbol(symbol), position_a(position_a), position_b(position_b) {}
    char symbol;
    int position_a;  // 1-indexed linear positions of the clash
    int position_b;
};

// A plaintext letter has no homophones, or a generator allocation misses a letter.
class CoverageError : public Error {
public:
    using Error::Error;
};

// Bundled data failed its digest check.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace zkit
