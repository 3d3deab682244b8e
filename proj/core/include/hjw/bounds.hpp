#pragma once

// Upper-bound arithmetic that degrades gracefully: exact arbitrary-precision
// integers while results stay under a digit budget, symbolic expression trees
// (power towers with named atoms) beyond it. Comparisons are decided only
// when sound: exact vs exact, shared shape, or saturating lower/upper
// evaluation; everything else reports unknown.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "hjw/errors.hpp"

namespace hjw {

using BigInt = boost::multiprecision::cpp_int;

struct TowerNode;
using TowerPtr = std::shared_ptr<const TowerNode>;

class BigBound {
  public:
    BigBound() : exact_(0) {}
    static BigBound from_int(BigInt v);
    static BigBound atom(std::string name, std::uint64_t lb_digits = 1);
    static BigBound tower(TowerPtr node);

    bool is_exact() const { return !node_; }
    const BigInt& exact_value() const;  // BadParams when symbolic
    const TowerPtr& node() const { return node_; }

    std::string to_string(std::size_t max_chars = 1u << 16) const;
    nlohmann::json to_json() const;  // expression DAG; exact values inline

  private:
    BigInt exact_;
    TowerPtr node_;  // null for exact values
};

struct TowerNode {
    enum class Op { value, atom, add, mul, pow, binom };

    Op op = Op::value;
    BigInt value;                    // op == value
    std::string name;                // op == atom
    std::uint64_t lb_digits = 1;     // op == atom: value has at least this many digits
    std::vector<BigBound> args;
};

// Decimal-digit budget below which arithmetic keeps exact integers.
struct FoldPolicy {
    std::uint64_t max_digits = 1000000;
};

// Arithmetic with folding: results stay exact while both operands are exact
// and the result fits the digit budget, otherwise a tower node is produced.
BigBound bb_add(const BigBound& a, const BigBound& b, const FoldPolicy& p = {});
BigBound bb_mul(const BigBound& a, const BigBound& b, const FoldPolicy& p = {});
BigBound bb_pow(const BigBound& base, const BigBound& exp, const FoldPolicy& p = {});
BigBound bb_binom(const BigBound& n, const BigBound& k, const FoldPolicy& p = {});

// Display-form constructors: always produce tower nodes, never fold.
BigBound tower_add(std::vector<BigBound> args);
BigBound tower_mul(std::vector<BigBound> args);
BigBound tower_pow(BigBound base, BigBound exp);
BigBound tower_binom(BigBound n, BigBound k);

std::uint64_t decimal_digits(const BigInt& v);

enum class Cmp { less, equal, greater, unknown };

// Sound partial comparison. All quantities are taken to be >= 1 (every bound
// in this module is), which makes +, *, ^ monotone; binomials compare only
// with equal second arguments or an exact second argument during saturation.
Cmp compare(const BigBound& a, const BigBound& b);

// Saturating evaluation: a lower bound for the expression, capped. Atoms
// contribute 10^(lb_digits-1). Returns nullopt only when no sound lower
// bound exists (never for values >= 1; kept optional for symmetry).
BigInt sat_lower(const BigBound& b, const BigInt& cap);
// Upper counterpart; nullopt when the expression contains an atom or a
// symbolic binomial index.
std::optional<BigInt> sat_upper(const BigBound& b, const BigInt& cap);

// --- bound operations -------------------------------------------------------

// Scale-function hierarchy: E_0(x,y) = x+y, E_1(x) = x^2+2, E_{n+2}(0) = 2,
// E_{n+2}(x+1) = E_{n+1}(E_{n+2}(x)). Past the digit budget the value is the
// atom E_{n}(arg) with a digit-count lower bound carried along.
BigBound grzegorczyk_E(int n, const std::vector<BigInt>& args, const FoldPolicy& p = {});

// Tower 2^(2^(r^(2^(2^(m+9))))) for the one-dimensional grid number with r
// colors and side m; built verbatim, only m+9 is evaluated.
BigBound gowers_W_bound(const BigInt& r, const BigInt& m);

// Exact values callers may plug in to replace recurrence steps.
using ExactTable = std::map<std::tuple<BigInt, BigInt, BigInt>, BigInt>;

// Upper bound for the least n with every c-coloring of [n]^l owning a
// homogeneous m-set. Base cases: l = 1 pigeonhole c(m-1)+1; m = l exact m.
// Step: T = bound(m-1, l-1, c) + 1, result (T+1) * c^(T * binom(T, l-1)) —
// the classical stepping-up recurrence. Symbolic atom R(m,l,c) when m is not
// exact or the recursion would run past `max_depth`.
BigBound ramsey_R_bound(const BigBound& m, const BigBound& l, const BigBound& c,
                        const ExactTable* exact = nullptr, const FoldPolicy& p = {},
                        int max_depth = 64);

// Bound for the all-levels-below-l+1 homogeneous number: R(2l, l, c^l).
BigBound level_ramsey_bound(const BigBound& l, const BigBound& c_size,
                            const ExactTable* exact = nullptr, const FoldPolicy& p = {});

// Bound for the base-letter invariance number: level_ramsey over color set
// m * c^(k^m); m = 1 is trivially 1.
BigBound par_alpha_bound(const BigBound& m, const BigBound& k_size, const BigBound& c_size,
                         const ExactTable* exact = nullptr, const FoldPolicy& p = {});

// Bound for the full-symmetry invariance number: iterate m_{j+1} =
// level_ramsey_bound(m_j - 1, c^(k^{m_j})) from m_0 = m, k_size times.
BigBound par_full_bound(const BigBound& m, int k_size, const BigBound& c_size,
                        const ExactTable* exact = nullptr, const FoldPolicy& p = {});

// Bound for the least ground with a monochromatic dim-dimensional convex
// subspace: par_full_bound over m_0 = k_size * w_value, where w_value bounds
// the grid number with dimension k_size-1, side dim+1 (just fitting). Callers
// supply w_value (exact desk value or atom); for k_size = 2 it defaults to
// gowers_W_bound(c, dim+1). Throws MissingWValue for k_size >= 3 without one.
BigBound hj_bound(int dim, int k_size, const BigBound& c_size,
                  std::optional<BigBound> w_value = std::nullopt,
                  const ExactTable* exact = nullptr, const FoldPolicy& p = {});

// Alternative route: dim * HJ(1, k^dim, c), the packing reduction, as a
// display expression over the atom HJ(1, k^dim, c).
BigBound hj_bound_via_packing(int dim, int k_size, const BigInt& c_size);

}  // namespace hjw
