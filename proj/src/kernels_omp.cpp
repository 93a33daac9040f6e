#include "mpt/kernels.hpp"

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpt::kernel {

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Series::SliceMap mul_sliced(const Series::SliceMap &a, const Series::SliceMap &b, int64_t q_cut)
{
    // Output slice -> contributing (slice of a, slice of b) pairs.
    std::map<int64_t, std::vector<std::pair<const Poly *, const Poly *>>> plan;
    for (const auto &[qa, pa] : a) {
        for (const auto &[qb, pb] : b) {
            if (qa + qb >= q_cut) {
                break; // b is sorted by q
            }
            plan[qa + qb].emplace_back(&pa, &pb);
        }
    }

    std::vector<int64_t> targets;
    std::vector<const std::vector<std::pair<const Poly *, const Poly *>> *> work;
    targets.reserve(plan.size());
    for (const auto &[q, pairs] : plan) {
        targets.push_back(q);
        work.push_back(&pairs);
    }
    std::vector<Poly> results(targets.size());

    const auto n = static_cast<long>(targets.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
        try {
            Poly acc;
            for (const auto &[pa, pb] : *work[k]) {
                poly_mul_add(acc, *pa, *pb);
            }
            std::erase_if(acc, [](const auto &kv) { return kv.second.is_zero(); });
            results[k] = std::move(acc);
        } catch (...) {
#pragma omp critical(mpt_mul_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    Series::SliceMap out;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (!results[k].empty()) {
            out.emplace(targets[k], std::move(results[k]));
        }
    }
    return out;
}

} // namespace mpt::kernel
