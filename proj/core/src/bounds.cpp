#include "hjw/bounds.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace hjw {

namespace {

using Op = TowerNode::Op;

constexpr std::uint64_t kDigitSat = UINT64_C(1) << 62;

// floor(bits * log10(2)) + 1 rounded up a hair: an upper estimate of the
// decimal digit count from the bit length, cheap enough to call per fold
// decision. 30103/100000 slightly exceeds log10(2); the overshoot stays
// below one digit for every representable size here.
std::uint64_t digits_upper(const BigInt& v) {
    if (v == 0) return 1;
    const std::uint64_t bits =
        boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
    return bits * 30103 / 100000 + 1;
}

// Compact deterministic rendering for atom names and display forms.
std::string value_repr(const BigInt& v) {
    const std::uint64_t up = digits_upper(v);
    if (up <= 64) return v.str();
    return (v < 0 ? std::string("-~10^") : std::string("~10^")) + std::to_string(up - 1);
}

}  // namespace

std::uint64_t decimal_digits(const BigInt& v) {
    BigInt a = boost::multiprecision::abs(v);
    if (a == 0) return 1;
    const std::uint64_t bits = boost::multiprecision::msb(a) + 1;
    if (bits <= (1u << 20)) return a.str().size();
    // Start from a certain lower bound (30102/100000 < log10(2)), then step
    // up; digits(a) is the least d with a < 10^d.
    std::uint64_t d = (bits - 1) * 30102 / 100000 + 1;
    BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(d));
    while (a >= p) {
        p *= 10;
        ++d;
    }
    return d;
}

BigBound BigBound::from_int(BigInt v) {
    BigBound b;
    b.exact_ = std::move(v);
    return b;
}

BigBound BigBound::atom(std::string name, std::uint64_t lb_digits) {
    auto n = std::make_shared<TowerNode>();
    n->op = Op::atom;
    n->name = std::move(name);
    n->lb_digits = std::max<std::uint64_t>(lb_digits, 1);
    return tower(std::move(n));
}

BigBound BigBound::tower(TowerPtr node) {
    if (!node) throw BadParams("null tower node");
    BigBound b;
    b.node_ = std::move(node);
    return b;
}

const BigInt& BigBound::exact_value() const {
    if (node_) throw BadParams("bound is symbolic; no exact value");
    return exact_;
}

BigBound tower_add(std::vector<BigBound> args) {
    if (args.empty()) throw BadParams("sum needs at least one term");
    auto n = std::make_shared<TowerNode>();
    n->op = Op::add;
    n->args = std::move(args);
    return BigBound::tower(std::move(n));
}

BigBound tower_mul(std::vector<BigBound> args) {
    if (args.empty()) throw BadParams("product needs at least one factor");
    auto n = std::make_shared<TowerNode>();
    n->op = Op::mul;
    n->args = std::move(args);
    return BigBound::tower(std::move(n));
}

BigBound tower_pow(BigBound base, BigBound exp) {
    auto n = std::make_shared<TowerNode>();
    n->op = Op::pow;
    n->args = {std::move(base), std::move(exp)};
    return BigBound::tower(std::move(n));
}

BigBound tower_binom(BigBound nn, BigBound k) {
    auto n = std::make_shared<TowerNode>();
    n->op = Op::binom;
    n->args = {std::move(nn), std::move(k)};
    return BigBound::tower(std::move(n));
}

BigBound bb_add(const BigBound& a, const BigBound& b, const FoldPolicy& p) {
    if (a.is_exact() && a.exact_value() == 0) return b;
    if (b.is_exact() && b.exact_value() == 0) return a;
    if (a.is_exact() && b.is_exact()) {
        const std::uint64_t d = std::max(digits_upper(a.exact_value()),
                                         digits_upper(b.exact_value()));
        if (d + 1 <= p.max_digits) return BigBound::from_int(a.exact_value() + b.exact_value());
    }
    return tower_add({a, b});
}

BigBound bb_mul(const BigBound& a, const BigBound& b, const FoldPolicy& p) {
    if (a.is_exact()) {
        if (a.exact_value() == 0) return BigBound::from_int(0);
        if (a.exact_value() == 1) return b;
    }
    if (b.is_exact()) {
        if (b.exact_value() == 0) return BigBound::from_int(0);
        if (b.exact_value() == 1) return a;
    }
    if (a.is_exact() && b.is_exact()) {
        const std::uint64_t d =
            digits_upper(a.exact_value()) + digits_upper(b.exact_value());
        if (d <= p.max_digits) return BigBound::from_int(a.exact_value() * b.exact_value());
    }
    return tower_mul({a, b});
}

BigBound bb_pow(const BigBound& base, const BigBound& exp, const FoldPolicy& p) {
    if (exp.is_exact()) {
        if (exp.exact_value() == 0) return BigBound::from_int(1);
        if (exp.exact_value() == 1) return base;
        if (exp.exact_value() < 0) throw BadParams("exponent must be nonnegative");
    }
    if (base.is_exact() && (base.exact_value() == 0 || base.exact_value() == 1)) return base;
    if (base.is_exact() && exp.is_exact() && exp.exact_value() <= p.max_digits) {
        const std::uint64_t e = exp.exact_value().convert_to<std::uint64_t>();
        const std::uint64_t d = digits_upper(base.exact_value());
        if (d <= p.max_digits / e)
            return BigBound::from_int(
                boost::multiprecision::pow(base.exact_value(), static_cast<unsigned>(e)));
    }
    return tower_pow(base, exp);
}

BigBound bb_binom(const BigBound& n, const BigBound& k, const FoldPolicy& p) {
    if (k.is_exact()) {
        if (k.exact_value() < 0) throw BadParams("binomial index must be nonnegative");
        if (k.exact_value() == 0) return BigBound::from_int(1);
        if (k.exact_value() == 1) return n;
    }
    if (n.is_exact() && k.is_exact()) {
        if (k.exact_value() > n.exact_value()) return BigBound::from_int(0);
        if (k.exact_value() <= 1000000) {
            const std::uint64_t ku = k.exact_value().convert_to<std::uint64_t>();
            if (ku <= p.max_digits / std::max<std::uint64_t>(digits_upper(n.exact_value()), 1)) {
                BigInt r = 1;
                const BigInt& nv = n.exact_value();
                for (std::uint64_t i = 1; i <= ku; ++i)
                    r = r * (nv - BigInt(ku) + i) / BigInt(i);
                return BigBound::from_int(r);
            }
        }
    }
    return tower_binom(n, k);
}

// --- saturating evaluation ---------------------------------------------------

namespace {

BigInt clamp_cap(BigInt v, const BigInt& cap) { return v > cap ? cap : std::move(v); }

BigInt sat_lower_rec(const BigBound& b, const BigInt& cap, const std::uint64_t cap_digits,
                     const std::uint64_t cap_bits,
                     std::map<const TowerNode*, BigInt>& memo) {
    if (b.is_exact()) {
        BigInt v = b.exact_value();
        if (v < 0) v = 0;
        return clamp_cap(std::move(v), cap);
    }
    const TowerNode* nd = b.node().get();
    if (auto it = memo.find(nd); it != memo.end()) return it->second;
    BigInt r = 0;
    switch (nd->op) {
        case Op::value: {
            BigInt v = nd->value;
            if (v < 0) v = 0;
            r = clamp_cap(std::move(v), cap);
            break;
        }
        case Op::atom: {
            if (nd->lb_digits - 1 >= cap_digits)
                r = cap;
            else
                r = clamp_cap(boost::multiprecision::pow(
                                  BigInt(10), static_cast<unsigned>(nd->lb_digits - 1)),
                              cap);
            break;
        }
        case Op::add: {
            for (const auto& a : nd->args)
                r = clamp_cap(r + sat_lower_rec(a, cap, cap_digits, cap_bits, memo), cap);
            break;
        }
        case Op::mul: {
            r = 1;
            for (const auto& a : nd->args)
                r = clamp_cap(r * sat_lower_rec(a, cap, cap_digits, cap_bits, memo), cap);
            break;
        }
        case Op::pow: {
            const BigInt bl = sat_lower_rec(nd->args[0], cap, cap_digits, cap_bits, memo);
            const BigInt el = sat_lower_rec(nd->args[1], cap, cap_digits, cap_bits, memo);
            if (bl <= 1) {
                r = bl;  // 0^e or 1^e; still a sound lower bound
            } else if (el > cap_bits) {
                r = cap;  // 2^el already tops the cap
            } else {
                r = clamp_cap(
                    boost::multiprecision::pow(bl, el.convert_to<unsigned>()), cap);
            }
            break;
        }
        case Op::binom: {
            const BigInt nl = sat_lower_rec(nd->args[0], cap, cap_digits, cap_bits, memo);
            std::optional<BigInt> kv;
            if (nd->args[1].is_exact()) kv = nd->args[1].exact_value();
            else if (nd->args[1].node()->op == Op::value) kv = nd->args[1].node()->value;
            if (!kv || *kv < 1 || *kv > nl) {
                r = 1;  // C(n,k) >= 1 whenever the binomial is meaningful
            } else if (*kv > 1000000) {
                r = clamp_cap(nl - *kv + 1, cap);  // first factor already a bound
            } else {
                const std::uint64_t ku = kv->convert_to<std::uint64_t>();
                r = 1;
                for (std::uint64_t i = 1; i <= ku; ++i) {
                    r = r * (nl - BigInt(ku) + i) / BigInt(i);
                    if (r > cap) {
                        r = cap;  // partial values only grow from here
                        break;
                    }
                }
            }
            break;
        }
    }
    memo.emplace(nd, r);
    return r;
}

std::optional<BigInt> sat_upper_rec(const BigBound& b, const BigInt& cap,
                                    const std::uint64_t cap_bits,
                                    std::map<const TowerNode*, std::optional<BigInt>>& memo) {
    if (b.is_exact()) {
        if (b.exact_value() > cap) return std::nullopt;
        return b.exact_value();
    }
    const TowerNode* nd = b.node().get();
    if (auto it = memo.find(nd); it != memo.end()) return it->second;
    std::optional<BigInt> r;
    switch (nd->op) {
        case Op::value:
            if (nd->value <= cap) r = nd->value;
            break;
        case Op::atom:
            break;  // no upper bound for a named unknown
        case Op::add: {
            BigInt s = 0;
            bool ok = true;
            for (const auto& a : nd->args) {
                auto u = sat_upper_rec(a, cap, cap_bits, memo);
                if (!u) {
                    ok = false;
                    break;
                }
                s += *u;
                if (s > cap) {
                    ok = false;
                    break;
                }
            }
            if (ok) r = s;
            break;
        }
        case Op::mul: {
            BigInt s = 1;
            bool ok = true;
            for (const auto& a : nd->args) {
                auto u = sat_upper_rec(a, cap, cap_bits, memo);
                if (!u) {
                    ok = false;
                    break;
                }
                s *= *u;
                if (s > cap) {
                    ok = false;
                    break;
                }
            }
            if (ok) r = s;
            break;
        }
        case Op::pow: {
            auto bu = sat_upper_rec(nd->args[0], cap, cap_bits, memo);
            auto eu = sat_upper_rec(nd->args[1], cap, cap_bits, memo);
            if (!bu || !eu) break;
            if (*bu == 0) {
                r = BigInt(*eu == 0 ? 1 : 0);
            } else if (*bu == 1) {
                r = BigInt(1);
            } else if (*eu > cap_bits) {
                break;
            } else {
                BigInt v = boost::multiprecision::pow(*bu, eu->convert_to<unsigned>());
                if (v <= cap) r = std::move(v);
            }
            break;
        }
        case Op::binom: {
            std::optional<BigInt> kv;
            if (nd->args[1].is_exact()) kv = nd->args[1].exact_value();
            else if (nd->args[1].node()->op == Op::value) kv = nd->args[1].node()->value;
            if (!kv || *kv < 0 || *kv > 1000000) break;
            auto nu = sat_upper_rec(nd->args[0], cap, cap_bits, memo);
            if (!nu) break;
            if (*kv > *nu) {
                r = BigInt(0);
                break;
            }
            const std::uint64_t ku = kv->convert_to<std::uint64_t>();
            BigInt v = 1;
            bool ok = true;
            for (std::uint64_t i = 1; i <= ku; ++i) {
                v = v * (*nu - BigInt(ku) + i) / BigInt(i);
                if (v > cap) {
                    ok = false;
                    break;
                }
            }
            if (ok) r = std::move(v);
            break;
        }
    }
    memo.emplace(nd, r);
    return r;
}

}  // namespace

BigInt sat_lower(const BigBound& b, const BigInt& cap) {
    if (cap < 1) throw BadParams("cap must be positive");
    std::map<const TowerNode*, BigInt> memo;
    const std::uint64_t cap_digits = decimal_digits(cap);
    const std::uint64_t cap_bits = boost::multiprecision::msb(cap) + 1;
    return sat_lower_rec(b, cap, cap_digits, cap_bits, memo);
}

std::optional<BigInt> sat_upper(const BigBound& b, const BigInt& cap) {
    if (cap < 1) throw BadParams("cap must be positive");
    std::map<const TowerNode*, std::optional<BigInt>> memo;
    const std::uint64_t cap_bits = boost::multiprecision::msb(cap) + 1;
    return sat_upper_rec(b, cap, cap_bits, memo);
}

// --- comparison --------------------------------------------------------------

namespace {

Cmp cmp_of(const BigInt& a, const BigInt& b) {
    if (a < b) return Cmp::less;
    if (a > b) return Cmp::greater;
    return Cmp::equal;
}

// Structural comparison: decides only along matching shapes, using the
// monotonicity of +, *, ^ and binomials over quantities >= 1.
Cmp shape_cmp(const BigBound& a, const BigBound& b) {
    if (a.is_exact() && b.is_exact()) return cmp_of(a.exact_value(), b.exact_value());
    if (a.is_exact() || b.is_exact()) return Cmp::unknown;
    const TowerNode* na = a.node().get();
    const TowerNode* nb = b.node().get();
    if (na == nb) return Cmp::equal;  // shared subexpression
    if (na->op != nb->op) return Cmp::unknown;
    switch (na->op) {
        case Op::value:
            return cmp_of(na->value, nb->value);
        case Op::atom:
            return na->name == nb->name ? Cmp::equal : Cmp::unknown;
        case Op::add:
        case Op::mul: {
            if (na->args.size() != nb->args.size()) return Cmp::unknown;
            bool any_less = false, any_greater = false;
            for (std::size_t i = 0; i < na->args.size(); ++i) {
                switch (shape_cmp(na->args[i], nb->args[i])) {
                    case Cmp::less: any_less = true; break;
                    case Cmp::greater: any_greater = true; break;
                    case Cmp::equal: break;
                    case Cmp::unknown: return Cmp::unknown;
                }
                if (any_less && any_greater) return Cmp::unknown;
            }
            if (any_less) return Cmp::less;
            if (any_greater) return Cmp::greater;
            return Cmp::equal;
        }
        case Op::pow: {
            const Cmp bc = shape_cmp(na->args[0], nb->args[0]);
            const Cmp ec = shape_cmp(na->args[1], nb->args[1]);
            if (bc == Cmp::equal && ec == Cmp::equal) return Cmp::equal;
            if (bc == Cmp::less && (ec == Cmp::less || ec == Cmp::equal)) return Cmp::less;
            if (bc == Cmp::greater && (ec == Cmp::greater || ec == Cmp::equal))
                return Cmp::greater;
            if (bc == Cmp::equal && ec != Cmp::unknown) {
                // a^x vs a^y decides strictly only when the shared base is
                // known to be at least 2 (1^x = 1^y).
                if (sat_lower(na->args[0], BigInt(2)) >= 2) return ec;
            }
            return Cmp::unknown;
        }
        case Op::binom: {
            if (shape_cmp(na->args[1], nb->args[1]) != Cmp::equal) return Cmp::unknown;
            const Cmp nc = shape_cmp(na->args[0], nb->args[0]);
            if (nc == Cmp::unknown) return Cmp::unknown;
            return nc;  // C(n,k) grows with n on the meaningful range n >= k
        }
    }
    return Cmp::unknown;
}

const BigInt& compare_cap() {
    static const BigInt cap = boost::multiprecision::pow(BigInt(10), 1000);
    return cap;
}

}  // namespace

Cmp compare(const BigBound& a, const BigBound& b) {
    if (a.is_exact() && b.is_exact()) return cmp_of(a.exact_value(), b.exact_value());
    if (!a.is_exact() && !b.is_exact()) {
        const Cmp s = shape_cmp(a, b);
        if (s != Cmp::unknown) return s;
    }
    const BigInt& cap = compare_cap();
    const BigInt la = sat_lower(a, cap);
    const BigInt lb = sat_lower(b, cap);
    const auto ua = sat_upper(a, cap);
    const auto ub = sat_upper(b, cap);
    if (ua && *ua < lb) return Cmp::less;
    if (ub && *ub < la) return Cmp::greater;
    if (ua && ub && la == *ua && lb == *ub && *ua == *ub) return Cmp::equal;
    return Cmp::unknown;
}

// --- rendering and serialization ----------------------------------------------

namespace {

bool is_atomic_form(const BigBound& b) {
    if (b.is_exact()) return true;
    const Op op = b.node()->op;
    return op == Op::value || op == Op::atom;
}

void render(const BigBound& b, std::string& out, std::size_t max_chars, bool& truncated);

void render_piece(const std::string& s, std::string& out, std::size_t max_chars,
                  bool& truncated) {
    if (truncated) return;
    if (out.size() + s.size() > max_chars) {
        out.append(s, 0, max_chars > out.size() ? max_chars - out.size() : 0);
        out += "...";
        truncated = true;
        return;
    }
    out += s;
}

void render_operand(const BigBound& b, std::string& out, std::size_t max_chars,
                    bool& truncated) {
    if (is_atomic_form(b)) {
        render(b, out, max_chars, truncated);
    } else {
        render_piece("(", out, max_chars, truncated);
        render(b, out, max_chars, truncated);
        render_piece(")", out, max_chars, truncated);
    }
}

void render(const BigBound& b, std::string& out, std::size_t max_chars, bool& truncated) {
    if (truncated) return;
    if (b.is_exact()) {
        render_piece(value_repr(b.exact_value()), out, max_chars, truncated);
        return;
    }
    const TowerNode& n = *b.node();
    switch (n.op) {
        case Op::value:
            render_piece(value_repr(n.value), out, max_chars, truncated);
            break;
        case Op::atom:
            render_piece(n.name, out, max_chars, truncated);
            break;
        case Op::add:
        case Op::mul: {
            render_piece("(", out, max_chars, truncated);
            const char* sep = n.op == Op::add ? " + " : " * ";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i > 0) render_piece(sep, out, max_chars, truncated);
                render(n.args[i], out, max_chars, truncated);
                if (truncated) return;
            }
            render_piece(")", out, max_chars, truncated);
            break;
        }
        case Op::pow:
            render_operand(n.args[0], out, max_chars, truncated);
            render_piece("^", out, max_chars, truncated);
            render_operand(n.args[1], out, max_chars, truncated);
            break;
        case Op::binom:
            render_piece("C(", out, max_chars, truncated);
            render(n.args[0], out, max_chars, truncated);
            render_piece(", ", out, max_chars, truncated);
            render(n.args[1], out, max_chars, truncated);
            render_piece(")", out, max_chars, truncated);
            break;
    }
}

std::string short_repr(const BigBound& b) { return b.to_string(40); }

}  // namespace

std::string BigBound::to_string(std::size_t max_chars) const {
    std::string out;
    bool truncated = false;
    render(*this, out, max_chars, truncated);
    return out;
}

nlohmann::json BigBound::to_json() const {
    nlohmann::json j{{"format", 1}};
    if (is_exact()) {
        j["exact"] = exact_.str();
        return j;
    }
    nlohmann::json nodes = nlohmann::json::array();
    std::map<const TowerNode*, std::size_t> ids;
    std::map<BigInt, std::size_t> value_ids;  // dedupe big exact leaves
    std::function<std::size_t(const BigBound&)> visit = [&](const BigBound& b) -> std::size_t {
        if (b.is_exact()) {
            if (auto it = value_ids.find(b.exact_value()); it != value_ids.end())
                return it->second;
            nodes.push_back({{"op", "value"}, {"value", b.exact_value().str()}});
            value_ids.emplace(b.exact_value(), nodes.size() - 1);
            return nodes.size() - 1;
        }
        const TowerNode* nd = b.node().get();
        if (auto it = ids.find(nd); it != ids.end()) return it->second;
        nlohmann::json nj;
        switch (nd->op) {
            case Op::value:
                nj = {{"op", "value"}, {"value", nd->value.str()}};
                break;
            case Op::atom:
                nj = {{"op", "atom"}, {"name", nd->name}, {"lb_digits", nd->lb_digits}};
                break;
            case Op::add:
            case Op::mul:
            case Op::pow:
            case Op::binom: {
                std::vector<std::size_t> arg_ids;
                arg_ids.reserve(nd->args.size());
                for (const auto& a : nd->args) arg_ids.push_back(visit(a));
                const char* name = nd->op == Op::add   ? "add"
                                   : nd->op == Op::mul ? "mul"
                                   : nd->op == Op::pow ? "pow"
                                                       : "binom";
                nj = {{"op", name}, {"args", arg_ids}};
                break;
            }
        }
        nodes.push_back(std::move(nj));
        ids.emplace(nd, nodes.size() - 1);
        return nodes.size() - 1;
    };
    j["root"] = visit(*this);
    j["nodes"] = std::move(nodes);
    return j;
}

// --- bound operations ----------------------------------------------------------

namespace {

// Decrement that preserves upper-bound validity: exact values step down (not
// below one); symbolic values are left alone, a documented slack since every
// consumer is monotone in this argument.
BigBound bb_dec(const BigBound& b) {
    if (!b.is_exact()) return b;
    BigInt v = b.exact_value() - 1;
    if (v < 1) v = 1;
    return BigBound::from_int(std::move(v));
}

std::uint64_t sat_double(std::uint64_t d, std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps && i < 64; ++i) {
        if (d >= kDigitSat) return kDigitSat;
        d = 2 * d - 1;
    }
    return std::min(d, kDigitSat);
}

std::uint64_t lb_digits_of(const BigBound& b) {
    const BigInt low = sat_lower(b, compare_cap());
    if (low < 1) return 1;
    return decimal_digits(low);
}

}  // namespace

BigBound grzegorczyk_E(int n, const std::vector<BigInt>& args, const FoldPolicy& p) {
    if (n < 0) throw BadParams("hierarchy index must be nonnegative");
    if (n == 0) {
        if (args.size() != 2) throw BadParams("the base level takes two arguments");
        return bb_add(BigBound::from_int(args[0]), BigBound::from_int(args[1]), p);
    }
    if (args.size() != 1) throw BadParams("levels past the base take one argument");
    const BigInt& x = args[0];
    if (x < 0) throw BadParams("argument must be nonnegative");

    auto square_step = [&p](const BigInt& v) -> BigBound {
        const std::uint64_t d = digits_upper(v);
        if (d <= (p.max_digits + 1) / 2) return BigBound::from_int(v * v + 2);
        return BigBound::atom("E1(" + value_repr(v) + ")", 2 * std::min(d, kDigitSat / 2) - 1);
    };
    if (n == 1) return square_step(x);

    // E_n(x) for n >= 2: iterate E_{n-1} x times from 2, exactly while the
    // digit budget lasts. On overflow the unevaluated call becomes an atom;
    // each remaining application at least squares, so digit lower bounds
    // double per outstanding step.
    if (x == 0) return BigBound::from_int(2);
    constexpr std::uint64_t kIterCap = UINT64_C(1) << 20;
    if (x > kIterCap)
        return BigBound::atom("E" + std::to_string(n) + "(" + value_repr(x) + ")",
                              sat_double(1, kIterCap));
    const std::uint64_t xs = x.convert_to<std::uint64_t>();
    BigInt v = 2;
    for (std::uint64_t i = 1; i <= xs; ++i) {
        const BigBound step =
            n - 1 == 1 ? square_step(v) : grzegorczyk_E(n - 1, {v}, p);
        if (step.is_exact()) {
            v = step.exact_value();
            continue;
        }
        if (i == xs) return step;  // the whole value is this inner call
        const std::uint64_t inner_lb = step.node()->op == Op::atom ? step.node()->lb_digits : 1;
        return BigBound::atom("E" + std::to_string(n) + "(" + value_repr(x) + ")",
                              sat_double(inner_lb, xs - i));
    }
    return BigBound::from_int(v);
}

BigBound gowers_W_bound(const BigInt& r, const BigInt& m) {
    if (r < 1) throw BadParams("color count must be positive");
    if (m < 1) throw BadParams("side must be positive");
    const BigBound two = BigBound::from_int(2);
    BigBound t = BigBound::from_int(m + 9);
    t = tower_pow(two, std::move(t));
    t = tower_pow(two, std::move(t));
    t = tower_pow(BigBound::from_int(r), std::move(t));
    t = tower_pow(two, std::move(t));
    t = tower_pow(two, std::move(t));
    return t;
}

BigBound ramsey_R_bound(const BigBound& m, const BigBound& l, const BigBound& c,
                        const ExactTable* exact, const FoldPolicy& p, int max_depth) {
    if (l.is_exact() && l.exact_value() < 1) throw BadParams("tuple size must be positive");
    if (exact && m.is_exact() && l.is_exact() && c.is_exact()) {
        const auto it = exact->find({m.exact_value(), l.exact_value(), c.exact_value()});
        if (it != exact->end()) return BigBound::from_int(it->second);
    }
    if (m.is_exact() && l.is_exact()) {
        if (m.exact_value() < l.exact_value())
            throw BadParams("target must be at least the tuple size");
        if (m.exact_value() == l.exact_value()) return m;  // the base case is exact
    }
    if (l.is_exact() && l.exact_value() == 1) {
        // Pigeonhole; for symbolic m the slack m-1 -> m keeps it an upper bound.
        const BigBound m1 = m.is_exact() ? BigBound::from_int(m.exact_value() - 1) : m;
        return bb_add(bb_mul(c, m1, p), BigBound::from_int(1), p);
    }
    if (!m.is_exact() || !l.is_exact() || max_depth <= 0) {
        const std::string name =
            "R(" + short_repr(m) + "," + short_repr(l) + "," + short_repr(c) + ")";
        return BigBound::atom(name, lb_digits_of(m));
    }
    // Stepping-up: T = bound(m-1, l-1, c) + 1, then (T+1) * c^(T * C(T, l-1)).
    const BigBound T =
        bb_add(ramsey_R_bound(BigBound::from_int(m.exact_value() - 1),
                              BigBound::from_int(l.exact_value() - 1), c, exact, p,
                              max_depth - 1),
               BigBound::from_int(1), p);
    const BigBound lm1 = BigBound::from_int(l.exact_value() - 1);
    const BigBound count = bb_mul(T, bb_binom(T, lm1, p), p);
    return bb_mul(bb_add(T, BigBound::from_int(1), p), bb_pow(c, count, p), p);
}

BigBound level_ramsey_bound(const BigBound& l, const BigBound& c_size, const ExactTable* exact,
                            const FoldPolicy& p) {
    return ramsey_R_bound(bb_mul(BigBound::from_int(2), l, p), l, bb_pow(c_size, l, p), exact,
                          p);
}

BigBound par_alpha_bound(const BigBound& m, const BigBound& k_size, const BigBound& c_size,
                         const ExactTable* exact, const FoldPolicy& p) {
    if (m.is_exact() && m.exact_value() < 1) throw BadParams("target size must be positive");
    if (m.is_exact() && m.exact_value() == 1) return BigBound::from_int(1);
    const BigBound colors = bb_mul(m, bb_pow(c_size, bb_pow(k_size, m, p), p), p);
    return level_ramsey_bound(bb_dec(m), colors, exact, p);
}

BigBound par_full_bound(const BigBound& m, int k_size, const BigBound& c_size,
                        const ExactTable* exact, const FoldPolicy& p) {
    if (k_size < 1) throw BadParams("alphabet must be nonempty");
    if (m.is_exact() && m.exact_value() < 1) throw BadParams("target size must be positive");
    BigBound cur = m;
    for (int j = 0; j < k_size; ++j) {
        const BigBound colors = bb_pow(c_size, bb_pow(BigBound::from_int(k_size), cur, p), p);
        cur = level_ramsey_bound(bb_dec(cur), colors, exact, p);
    }
    return cur;
}

BigBound hj_bound(int dim, int k_size, const BigBound& c_size, std::optional<BigBound> w_value,
                  const ExactTable* exact, const FoldPolicy& p) {
    if (dim < 1) throw BadParams("subspace dimension must be positive");
    if (k_size < 1) throw BadParams("alphabet must be nonempty");
    if (k_size == 1) return BigBound::from_int(dim);
    if (!w_value) {
        if (k_size != 2)
            throw MissingWValue(
                "no default grid-number bound for alphabets past two; supply one");
        if (!c_size.is_exact())
            throw MissingWValue("the default grid-number bound needs an exact color count");
        w_value = gowers_W_bound(c_size.exact_value(), BigInt(dim) + 1);
    }
    const BigBound m0 = bb_mul(BigBound::from_int(k_size), *w_value, p);
    return par_full_bound(m0, k_size, c_size, exact, p);
}

BigBound hj_bound_via_packing(int dim, int k_size, const BigInt& c_size) {
    if (dim < 1) throw BadParams("subspace dimension must be positive");
    if (k_size < 1) throw BadParams("alphabet must be nonempty");
    if (c_size < 1) throw BadParams("color count must be positive");
    const BigInt packed =
        boost::multiprecision::pow(BigInt(k_size), static_cast<unsigned>(dim));
    const std::string name = "HJ(1," + packed.str() + "," + c_size.str() + ")";
    return tower_mul({BigBound::from_int(dim), BigBound::atom(name, 1)});
}

}  // namespace hjw
