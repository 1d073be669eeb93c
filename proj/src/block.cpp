#include "excesslab/block.hpp"

#include <stdexcept>

#include "excesslab/rng.hpp"

namespace excesslab {

Block::Block(std::span<const Symbol> symbols) {
    if (symbols.size() > kMaxLength) throw std::length_error("Block: at most 64 symbols");
    for (Symbol s : symbols) push_back(s);
}

Block Block::from_string(std::string_view digits) {
    Block b;
    for (char c : digits) {
        if (c == ',' || c == ' ') continue;
        if (c < '0' || c > '3') throw std::invalid_argument("Block: symbols must be digits 0-3");
        b.push_back(static_cast<Symbol>(c - '0'));
    }
    return b;
}

void Block::push_back(Symbol s) {
    if (s > 3) throw std::invalid_argument("Block: symbol out of range");
    if (size_ >= kMaxLength) throw std::length_error("Block: at most 64 symbols");
    words_[size_ >> 5] |= std::uint64_t{s} << ((size_ & 31u) * 2);
    ++size_;
}

void Block::pop_back() {
    if (size_ == 0) throw std::out_of_range("Block::pop_back on empty block");
    --size_;
    words_[size_ >> 5] &= ~(std::uint64_t{3} << ((size_ & 31u) * 2));
}

Block Block::reversed() const {
    Block r;
    for (unsigned i = size_; i-- > 0;) r.push_back((*this)[i]);
    return r;
}

std::string Block::to_string() const {
    std::string out(size_, '0');
    for (unsigned i = 0; i < size_; ++i) out[i] = static_cast<char>('0' + (*this)[i]);
    return out;
}

std::size_t Block::hash() const {
    return static_cast<std::size_t>(mix64(words_[0] ^ mix64(words_[1] + size_)));
}

BlockPair split_window(std::span<const Symbol> window) {
    if (window.size() % 2 != 0) throw std::invalid_argument("split_window: odd window length");
    const std::size_t n = window.size() / 2;
    return {Block(window.first(n)), Block(window.subspan(n))};
}

}  // namespace excesslab
