#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "excesslab/model.hpp"

namespace excesslab {

/// A symbol block of length <= 64 over an alphabet of at most 4 symbols,
/// packed two bits per symbol.
class Block {
public:
    static constexpr unsigned kMaxLength = 64;

    Block() = default;
    explicit Block(std::span<const Symbol> symbols);

    /// Parses a digit string such as "0120"; commas and spaces are ignored.
    static Block from_string(std::string_view digits);

    unsigned size() const { return size_; }
    bool empty() const { return size_ == 0; }
    Symbol operator[](unsigned i) const {
        return static_cast<Symbol>((words_[i >> 5] >> ((i & 31u) * 2)) & 3u);
    }
    void push_back(Symbol s);
    void pop_back();

    Block reversed() const;
    std::string to_string() const;
    std::size_t hash() const;

    friend auto operator<=>(const Block&, const Block&) = default;
    friend bool operator==(const Block&, const Block&) = default;

private:
    std::array<std::uint64_t, 2> words_{};
    std::uint8_t size_ = 0;
};

/// Adjacent (past, future) blocks of equal length.
struct BlockPair {
    Block past;
    Block future;

    friend auto operator<=>(const BlockPair&, const BlockPair&) = default;
    friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

struct BlockHash {
    std::size_t operator()(const Block& b) const { return b.hash(); }
    std::size_t operator()(const BlockPair& p) const { return p.past.hash() * 0x9E3779B97F4A7C15ull ^ p.future.hash(); }
};

/// Splits a window of length 2n into its past and future halves.
BlockPair split_window(std::span<const Symbol> window);

}  // namespace excesslab
