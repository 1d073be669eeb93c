#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "excesslab/exact.hpp"

namespace excesslab {
namespace {

constexpr std::array<char, 8> kMagic = {'E', 'X', 'L', 'T', 'B', 'L', '\0', '\n'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary cache assumes a little-endian host");

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("table cache: truncated file");
    return v;
}

std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

}  // namespace

void write_table_csv(const JointBlockTable& table, std::ostream& out) {
    out << "past,future,probability\n";
    for (const auto& e : table.entries)
        out << e.key.past.to_string() << ',' << e.key.future.to_string() << ',' << format_probability(e.probability)
            << '\n';
}

void write_table_csv(const JointBlockTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_table_csv(table, out);
}

void write_table_binary(const JointBlockTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint32_t>(out, table.blockLength);
    put<std::uint32_t>(out, table.alphabetSize);
    put<std::uint32_t>(out, 0);
    put<double>(out, table.prunedMass);
    put<double>(out, table.massUncertainty);
    put<std::uint64_t>(out, table.pathExtensions);
    put<std::uint64_t>(out, table.entries.size());
    std::vector<char> symbols(2 * table.blockLength);
    for (const auto& e : table.entries) {
        for (unsigned i = 0; i < table.blockLength; ++i) {
            symbols[i] = static_cast<char>(e.key.past[i]);
            symbols[table.blockLength + i] = static_cast<char>(e.key.future[i]);
        }
        out.write(symbols.data(), static_cast<std::streamsize>(symbols.size()));
        put<double>(out, e.probability);
    }
}

JointBlockTable read_table_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error(path.string() + " is not a joint-table cache");
    const auto version = get<std::uint32_t>(in);
    if (version != kFormatVersion)
        throw std::runtime_error("unsupported table cache version " + std::to_string(version));
    JointBlockTable t;
    t.blockLength = get<std::uint32_t>(in);
    t.alphabetSize = get<std::uint32_t>(in);
    (void)get<std::uint32_t>(in);
    if (t.blockLength < 1 || t.blockLength > Block::kMaxLength) throw std::runtime_error("table cache: bad block length");
    t.prunedMass = get<double>(in);
    t.massUncertainty = get<double>(in);
    t.pathExtensions = get<std::uint64_t>(in);
    const auto count = get<std::uint64_t>(in);
    t.entries.reserve(count);
    std::vector<char> symbols(2 * t.blockLength);
    for (std::uint64_t i = 0; i < count; ++i) {
        in.read(symbols.data(), static_cast<std::streamsize>(symbols.size()));
        if (!in) throw std::runtime_error("table cache: truncated file");
        TableEntry e;
        for (unsigned j = 0; j < t.blockLength; ++j) {
            e.key.past.push_back(static_cast<Symbol>(symbols[j]));
            e.key.future.push_back(static_cast<Symbol>(symbols[t.blockLength + j]));
        }
        e.probability = get<double>(in);
        t.entries.push_back(e);
    }
    return t;
}

}  // namespace excesslab
