#include "hjw/coloring.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace hjw {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= UINT64_C(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z *= UINT64_C(0x94D049BB133111EB);
    z ^= z >> 31;
    return z;
}

Coloring::Coloring(Ground g, Alphabet a, ColorSet c, Family f)
    : ground_(g), alphabet_(a), colors_(c), family_(f) {}

void Coloring::check_sizes() const {
    if (colors_.size < 1) throw BadParams("color set must be non-empty");
    space_size(ground_, alphabet_);  // validates ground/alphabet, overflow
}

Coloring Coloring::constant(Ground g, Alphabet a, ColorSet c, int value) {
    Coloring col(g, a, c, Family::constant);
    col.param_ = value;
    col.check_sizes();
    if (value < 0 || value >= c.size) throw BadParams("constant color out of range");
    return col;
}

Coloring Coloring::parity(Ground g, Alphabet a, ColorSet c, int base) {
    Coloring col(g, a, c, Family::parity);
    col.param_ = base;
    col.check_sizes();
    if (c.size < 2) throw BadParams("parity needs at least two colors");
    if (base < 0 || base >= a.size) throw BadParams("parity base letter out of alphabet");
    return col;
}

Coloring Coloring::random(Ground g, Alphabet a, ColorSet c, std::uint64_t seed) {
    Coloring col(g, a, c, Family::random);
    col.seed_ = seed;
    col.check_sizes();
    return col;
}

Coloring Coloring::table(Ground g, Alphabet a, ColorSet c, std::vector<int> values) {
    Coloring col(g, a, c, Family::table);
    col.check_sizes();
    if (values.size() != space_size(g, a)) throw BadParams("table size != space size");
    for (int v : values)
        if (v < 0 || v >= c.size) throw BadParams("table color out of range");
    col.table_ = std::make_shared<const std::vector<int>>(std::move(values));
    return col;
}

int Coloring::color_at_rank(std::uint64_t r) const {
    switch (family_) {
        case Family::table:
            return (*table_)[static_cast<std::size_t>(r)];
        case Family::constant:
            return param_;
        case Family::parity: {
            const Word w = unrank_word(r, ground_, alphabet_);
            int count = 0;
            for (int letter : w) count += letter == param_;
            return count % 2;
        }
        case Family::random:
            return static_cast<int>(mix64(seed_ + (r + 1) * UINT64_C(0x9E3779B97F4A7C15)) %
                                    static_cast<std::uint64_t>(colors_.size));
    }
    return 0;
}

std::vector<int> Coloring::materialize() const {
    if (family_ == Family::table) return *table_;
    const std::uint64_t n = domain_size();
    if (n > (1u << 22)) throw BadParams("space too large to materialize");
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < n; ++r) values.push_back(color_at_rank(r));
    return values;
}

bool Coloring::operator==(const Coloring& other) const {
    return ground_.length == other.ground_.length && alphabet_.size == other.alphabet_.size &&
           colors_.size == other.colors_.size && materialize() == other.materialize();
}

nlohmann::json Coloring::to_json() const {
    nlohmann::json j{{"format", 1},
                     {"alphabet", alphabet_.size},
                     {"length", ground_.length},
                     {"colors_n", colors_.size}};
    switch (family_) {
        case Family::table:
            j["table"] = *table_;
            break;
        case Family::constant:
            j["family"] = "constant";
            j["params"] = {{"value", param_}};
            break;
        case Family::parity:
            j["family"] = "parity";
            j["params"] = {{"base", param_}};
            break;
        case Family::random:
            j["family"] = "random";
            j["params"] = {{"seed", seed_}};
            break;
    }
    return j;
}

Coloring Coloring::from_json(const nlohmann::json& j) {
    const Ground g{j.at("length").get<int>()};
    const Alphabet a{j.at("alphabet").get<int>()};
    const ColorSet c{j.at("colors_n").get<int>()};
    if (j.contains("table")) return table(g, a, c, j.at("table").get<std::vector<int>>());
    const std::string family = j.at("family").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (family == "constant") return constant(g, a, c, params.value("value", 0));
    if (family == "parity") return parity(g, a, c, params.value("base", 0));
    if (family == "random") return random(g, a, c, params.value("seed", std::uint64_t{0}));
    throw BadParams("unknown coloring family: " + family);
}

Coloring make_coloring(const std::string& family, const nlohmann::json& params) {
    nlohmann::json j = params;
    j["family"] = family;
    if (family == "table" && j.contains("table")) j.erase("family");
    return Coloring::from_json(j);
}

std::uint64_t pack_values(const std::vector<int>& values, const std::vector<int>& radices) {
    std::uint64_t packed = 0;
    std::uint64_t weight = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        packed += static_cast<std::uint64_t>(values[i]) * weight;
        weight *= static_cast<std::uint64_t>(radices[i]);
    }
    return packed;
}

std::vector<int> unpack_values(std::uint64_t packed, const std::vector<int>& radices) {
    std::vector<int> values(radices.size());
    for (std::size_t i = 0; i < radices.size(); ++i) {
        values[i] = static_cast<int>(packed % static_cast<std::uint64_t>(radices[i]));
        packed /= static_cast<std::uint64_t>(radices[i]);
    }
    return values;
}

Coloring tuple_coloring(const std::vector<Coloring>& cs) {
    if (cs.empty()) throw BadParams("tuple_coloring needs at least one coloring");
    const Ground g = cs.front().ground();
    const Alphabet a = cs.front().alphabet();
    std::uint64_t product = 1;
    std::vector<int> radices;
    for (const Coloring& c : cs) {
        if (c.ground().length != g.length || c.alphabet().size != a.size)
            throw SpaceMismatch("tuple_coloring inputs live on different spaces");
        radices.push_back(c.colors().size);
        product *= static_cast<std::uint64_t>(c.colors().size);
    }
    if (product > (1u << 30)) throw BadParams("packed color set too large");
    const std::uint64_t n = cs.front().domain_size();
    if (n > (1u << 22)) throw BadParams("space too large to materialize");
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < n; ++r) {
        std::vector<int> per(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i) per[i] = cs[i].color_at_rank(r);
        values.push_back(static_cast<int>(pack_values(per, radices)));
    }
    return Coloring::table(g, a, ColorSet{static_cast<int>(product)}, std::move(values));
}

Coloring induced_coloring(const Coloring& c, const PartialWord& fill) {
    validate_partial_word(fill, c.alphabet());
    for (int pos : fill.domain)
        if (pos < 0 || pos >= c.ground().length)
            throw DomainMismatch("fill position outside the coloring's ground");
    const std::vector<int> kept =
        complement_positions(fill.domain, c.ground().length);
    const Ground sub_ground{static_cast<int>(kept.size())};
    return Coloring::from_function(sub_ground, c.alphabet(), c.colors(), [&](const Word& inner) {
        return c(assemble_word(inner, kept, fill, c.ground()));
    });
}

}  // namespace hjw
