#pragma once

// Perverse Hodge numbers of compactified Jacobians on the Enriques surface:
// the generating-series identity, table emission with unknown tracking, the three-form
// check of the primitive PT series and the large-d asymptotics.
//
// Conventions: ^p h^{i,j}_d = (-1)^{i+j} Coeff_{p^i u^j q^d}(rhs1 - rhs2).
// Unknown Betti numbers enter as symbols b_{i,d}, so undetermined table
// entries are exactly those carrying a symbol.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpt/ring.hpp"
#include "mpt/series.hpp"

namespace mpt {

// Betti numbers b_{0..4d+2} of M_d. Rows not set explicitly fall back to
// the defaults: d = 0 -> (1,2,1), d = 1 -> (1,0,10,22,10,0,1), d >= 2 ->
// prefix (1,0,11) with the remaining middle entries symbolic.
class BettiTable {
public:
    static BettiTable defaults() { return {}; }
    // JSON array of {"d": int, "betti": [ints], "complete": bool}.
    static BettiTable load(const std::string &path);
    static BettiTable parse(const std::string &json_text);

    // Full row; a prefix is completed by duality b_i = b_{4d+2-i} and symbols.
    void set(int d, const std::vector<Rational> &betti, bool complete);
    std::vector<LinExpr> row(int d) const;
    bool is_complete(int d) const;

private:
    std::map<int, std::vector<LinExpr>> rows_;
};

// (1-u^{-1}p)(1-up)/(-p) prod (1-q^m)^{-8} prod_{m odd} [7-factor block]^{-1}
Series keyeq_rhs1(int64_t q_cut);
// The same series from theta and eta quotients. `eta_prefactor` false drops
// the q^{k/24} factors of eta (negative control only).
Series keyeq_rhs1_jacobi(int64_t q_cut, bool eta_prefactor = true);
// (sum_d u^{-(2d+1)} sum_i (-u)^i b_{i,d} q^d) prod_m (...) over q^{2m}
Series keyeq_rhs2(const BettiTable &betti, int64_t q_cut);
Series keyeq_difference(const BettiTable &betti, int64_t q_cut);

struct PerverseTable {
    int d = 0;
    int i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;
    std::map<std::pair<int, int>, LinExpr> entries; // zero entries omitted
    // Nonzero coefficients outside the stated (i,j) range. Symbolic ones are
    // linear constraints on the unknown Betti numbers.
    std::vector<std::pair<std::pair<int, int>, LinExpr>> outside;

    LinExpr at(int i, int j) const;
    bool determined(int i, int j) const { return !at(i, j).has_symbols(); }
    bool all_determined() const;

    std::string to_markdown() const;
    std::string to_csv() const;
    std::string to_json() const;
};

// Table d from a precomputed keyeq_difference.
PerverseTable perverse_table_from(const Series &difference, int d);
PerverseTable perverse_table(int d, const BettiTable &betti, int64_t q_cut);
// Fiber-class tables: (-1)^{i+j} times the coefficients of a GV polynomial.
PerverseTable perverse_table_from_gv(const Series &gv, int d);

// Three displayed forms of the primitive PT series, compared to q_cut.
struct ChainReport {
    bool passed = false;
    std::string failing_step;
    std::optional<Mismatch> first;
    std::vector<std::string> steps;
};
struct ChainOptions {
    bool eta_prefactor = true;
    bool zero_omega = false; // all Omega inputs set to 0
};
ChainReport primitive_chain_check(int64_t q_cut, const BettiTable &betti,
                                  const ChainOptions &opts = {});

// Omega on half-integral squares: 8 q^{-1/2} prod (1-(ts)^{-1}q^n)^{-1}(1-q^n)^{-10}(1-ts q^n)^{-1}
Series omega_half_integral(int64_t q_cut);
// sum_d 8 (-u)^{-(2d+1)} H(M_d) q^d with H(M_d) = sum_i b_{i,d} (-u)^i
Series omega_integral(const BettiTable &betti, int64_t q_cut);

// x^i y^j -> q^{i+j} p^i u^j; exact through total degree `order`.
Series asympt_gf(int order);
// x -> q; exact through x^order.
Series betti_infty_gf(int order);
// Coefficient of x^i y^j in asympt_gf.
Rational asympt_coefficient(const Series &gf, int i, int j);

struct StabilizationEntry {
    int d = 0, i = 0, j = 0; // shifted indices for shifted checks
    LinExpr got;
    Rational expected;
    bool ok = false;
    int onset = 0; // stable_a only: first d from which the value is constant up to d
};
struct StabilizationReport {
    bool passed = true;
    std::vector<StabilizationEntry> shifted;      // ^p h~^{i,j}_d against asympt_gf
    std::vector<StabilizationEntry> second_term;  // rhs2 coefficients, expected 0
    std::vector<StabilizationEntry> stable_a;     // a_{ij} read off rhs1 alone at d = d_hi
};
// d ranges over [d_lo, d_hi] for the shifted comparison; the second-term
// vanishing is checked for every d <= d_hi.
StabilizationReport stabilization_check(int d_lo, int d_hi, const BettiTable &betti);

enum class ExtremalStatus { Match, Mismatch, Unknown };
struct ExtremalEntry {
    int d = 0, i = 0; // shifted i in [0, 2d+2], column j~ = 0
    LinExpr value;
    int conjectured = 0;
    ExtremalStatus status = ExtremalStatus::Unknown;
};
std::vector<ExtremalEntry> extremal_report(int d_max, const BettiTable &betti);
std::string to_string(ExtremalStatus s);

} // namespace mpt
