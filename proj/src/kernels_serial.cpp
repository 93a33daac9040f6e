#include "mpt/kernels.hpp"

#include <atomic>

namespace mpt::kernel {

namespace {
std::atomic<Mode> g_mode{Mode::Auto};
} // namespace

void set_mode(Mode m) { g_mode.store(m); }

Mode mode() { return g_mode.load(); }

void poly_mul_add(Poly &out, const Poly &a, const Poly &b)
{
    for (const auto &[ra, ca] : a) {
        for (const auto &[rb, cb] : b) {
            Rest r{ra[0] + rb[0], ra[1] + rb[1], ra[2] + rb[2], ra[3] + rb[3]};
            add_product(out[r], ca, cb);
        }
    }
}

Series::SliceMap mul_reference(const Series::SliceMap &a, const Series::SliceMap &b,
                               int64_t q_cut)
{
    // Flat term lists, one accumulator keyed by the full exponent.
    std::vector<std::pair<Exponent, const LinExpr *>> ta;
    std::vector<std::pair<Exponent, const LinExpr *>> tb;
    for (const auto &[q, poly] : a) {
        for (const auto &[r, c] : poly) {
            ta.emplace_back(join(q, r), &c);
        }
    }
    for (const auto &[q, poly] : b) {
        for (const auto &[r, c] : poly) {
            tb.emplace_back(join(q, r), &c);
        }
    }
    std::map<Exponent, LinExpr> acc;
    for (const auto &[ea, ca] : ta) {
        for (const auto &[eb, cb] : tb) {
            int64_t q = int64_t{ea[0]} + eb[0];
            if (q >= q_cut) {
                continue;
            }
            Exponent e;
            for (int k = 0; k < kNumVars; ++k) {
                e[k] = ea[k] + eb[k];
            }
            add_product(acc[e], *ca, *cb);
        }
    }
    Series::SliceMap out;
    for (auto &[e, c] : acc) {
        if (!c.is_zero()) {
            out[e[0]].emplace(rest_of(e), std::move(c));
        }
    }
    return out;
}

} // namespace mpt::kernel
