#pragma once

// C-colorings of a word space: dense tables and generator families
// (constant / base-letter parity / seeded pseudorandom). Colorings are
// immutable after construction and cheap to copy (shared backing).

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hjw/words.hpp"

namespace hjw {

struct ColorSet {
    int size;  // colors 0..size-1
};

// Fixed 64-bit mixer behind the Random family. Part of the file-format
// contract: color(rank) = mix64(seed + (rank+1) * 0x9E3779B97F4A7C15) % colors.
std::uint64_t mix64(std::uint64_t z);

class Coloring {
  public:
    static Coloring constant(Ground g, Alphabet a, ColorSet c, int value);
    static Coloring parity(Ground g, Alphabet a, ColorSet c, int base);
    static Coloring random(Ground g, Alphabet a, ColorSet c, std::uint64_t seed);
    static Coloring table(Ground g, Alphabet a, ColorSet c, std::vector<int> values);

    // Materializes fn over the whole space; throws BadParams when the space
    // exceeds the dense-table cap (2^22 words).
    template <typename Fn>
    static Coloring from_function(Ground g, Alphabet a, ColorSet c, Fn&& fn);

    int operator()(const Word& w) const { return color_at_rank(rank_word(w, alphabet_)); }
    int color_at_rank(std::uint64_t r) const;

    const Ground& ground() const { return ground_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const ColorSet& colors() const { return colors_; }
    std::uint64_t domain_size() const { return space_size(ground_, alphabet_); }

    // Dense table indexed by rank, materializing generator families.
    std::vector<int> materialize() const;

    nlohmann::json to_json() const;
    static Coloring from_json(const nlohmann::json& j);

    bool operator==(const Coloring& other) const;

  private:
    enum class Family { table, constant, parity, random };

    Coloring(Ground g, Alphabet a, ColorSet c, Family f);
    void check_sizes() const;

    Ground ground_{0};
    Alphabet alphabet_{1};
    ColorSet colors_{1};
    Family family_ = Family::constant;
    int param_ = 0;            // constant value or parity base
    std::uint64_t seed_ = 0;   // random
    std::shared_ptr<const std::vector<int>> table_;
};

// Builds a coloring from a family name and JSON params; the CLI entry point.
Coloring make_coloring(const std::string& family, const nlohmann::json& params);

// Packs per-coloring values into one coloring over the product color set,
// little-endian mixed radix (first coloring least significant). All inputs
// must share ground, alphabet; throws SpaceMismatch otherwise.
Coloring tuple_coloring(const std::vector<Coloring>& cs);

// Mixed-radix helpers shared by tuple packings.
std::uint64_t pack_values(const std::vector<int>& values, const std::vector<int>& radices);
std::vector<int> unpack_values(std::uint64_t packed, const std::vector<int>& radices);

// Restriction of c to the words extending `fill`, re-indexed over the
// canonical ground {0..|N|-1} where N = complement of fill.domain (order
// preserved). Throws DomainMismatch if fill exceeds c's ground.
Coloring induced_coloring(const Coloring& c, const PartialWord& fill);

template <typename Fn>
Coloring Coloring::from_function(Ground g, Alphabet a, ColorSet c, Fn&& fn) {
    const std::uint64_t n = space_size(g, a);
    if (n > (1u << 22)) throw BadParams("space too large to materialize");
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < n; ++r) values.push_back(fn(unrank_word(r, g, a)));
    return table(g, a, c, std::move(values));
}

}  // namespace hjw
