#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergo {

/// Symbols are small non-negative integers 0..alphabet-1.  Paths are stored
/// one byte per symbol, so alphabets are capped at 256 letters; countable
/// alphabets are handled by truncation.
using Symbol = std::uint8_t;
using SymbolView = std::span<const Symbol>;

inline constexpr int kMaxAlphabet = 256;

/// Bad arguments or malformed data handed to a library call.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid experiment or model configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An oracle was asked about a model class it cannot answer for.
class UnsupportedOracle : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Iterative solve did not settle within its cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Alphabet {
    int size = 2;

    constexpr bool contains(int s) const { return s >= 0 && s < size; }
    friend constexpr bool operator==(Alphabet, Alphabet) = default;
};

/// A finite one-sided realization X_0..X_n of a process.
class SamplePath {
public:
    SamplePath() = default;
    SamplePath(std::vector<Symbol> symbols, Alphabet alphabet);

    SymbolView view() const { return symbols_; }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    Alphabet alphabet() const { return alphabet_; }
    std::size_t size() const { return symbols_.size(); }
    /// Index of the last symbol (the "n" in X_0^n).
    std::size_t last() const { return symbols_.size() - 1; }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    /// Prefix X_0..X_n.
    SamplePath prefix(std::size_t n) const;

private:
    std::vector<Symbol> symbols_;
    Alphabet alphabet_;
};

void validate_symbols(SymbolView symbols, Alphabet alphabet);

}  // namespace ergo
