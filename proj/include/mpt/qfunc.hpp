#pragma once

// q-series special functions: quantum integers, eta, theta, plethystic
// Exp/Log and the virtual shift of Hodge polynomials.

#include <array>
#include <cstdint>

#include "mpt/series.hpp"

namespace mpt {

// x^{-(n-1)/2} (1 + x + ... + x^{n-1}); x defaults to t*s.
Series quantum_integer(int n, const Exponent &x = exponent({{Var::t, 1}, {Var::s, 1}}));

// q^{scale/24} prod_{m>=1} (1 - q^{scale m}), exact below q_cut (scaled).
// Without the prefactor the q^{scale/24} shift is dropped.
Series eta(int scale, int64_t q_cut, bool prefactor = true);
// eta(scale)^k for any integer k, expanded as one product.
Series eta_power(int scale, int k, int64_t q_cut, bool prefactor = true);

// (x^{1/2} - x^{-1/2}) prod_m (1 - x q^{sm})(1 - x^{-1} q^{sm}) / (1 - q^{sm})^2
// for a monomial x in (p,u,t,s) whose square root is on the lattice.
Series theta(const Exponent &x, int scale, int64_t q_cut);

// theta(p y) * theta(p y^{-1}) written without square roots of p y, whose
// zero mode is p - y - y^{-1} + p^{-1}.
Series theta_pair(const Exponent &y, int scale, int64_t q_cut);
// 1 / theta_pair, expanded ascending in p; valid for p <= p_hi (scaled).
Series theta_pair_inverse(const Exponent &y, int scale, int64_t q_cut, int64_t p_hi);

// exp(sum_k adams(f,k)/k)
Series plethystic_exp(const Series &f);
// sum_k mu(k)/k adams(log F, k), the inverse of plethystic_exp.
Series plethystic_log(const Series &F);

// (-1)^dim (ts)^{-dim/2} f
Series virtual_shift(const Series &f, int dim);

int moebius(int n);

// Hodge diamond h^{p,q} of a smooth projective variety.
struct HodgeData {
    int dim = 0;
    std::vector<std::vector<int>> h; // h[p][q]
};

// sum (-1)^{p+q} h^{p,q} t^p s^q
Series chi_ts(const HodgeData &X);
// chi_ts of the virtual motive: virtual_shift(chi_ts(X), dim X).
Series chi_vir(const HodgeData &X);

// Betti realization t = s = u.
Series betti_realization(const Series &f);
// Euler realization t = s = 1.
Series euler_realization(const Series &f);

} // namespace mpt
