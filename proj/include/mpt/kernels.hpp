#pragma once

// Cauchy-product kernels behind mpt::mul.
//
// mul_reference is the plain serial double loop over all term pairs and is
// kept as the oracle for tests and the benchmark baseline. mul_sliced groups
// terms by q-slice and computes every output slice independently, which is
// what the OpenMP loop parallelises over.

#include <cstdint>

#include "mpt/series.hpp"

namespace mpt::kernel {

enum class Mode { Auto, Serial, Parallel };

// Process-wide choice used by mpt::mul. Auto picks the sliced kernel.
void set_mode(Mode m);
Mode mode();

// Number of OpenMP threads the sliced kernel will use (1 without OpenMP).
int max_threads();

Series::SliceMap mul_reference(const Series::SliceMap &a, const Series::SliceMap &b,
                               int64_t q_cut);
Series::SliceMap mul_sliced(const Series::SliceMap &a, const Series::SliceMap &b,
                            int64_t q_cut);

// out += a * b for Laurent polynomials in (p,u,t,s).
void poly_mul_add(Poly &out, const Poly &a, const Poly &b);

} // namespace mpt::kernel
