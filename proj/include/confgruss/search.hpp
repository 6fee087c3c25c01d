#pragma once

#include <cmath>

namespace confgruss {

struct SearchPoint {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a maximum of `f` on [lo, hi], stopping when the
/// bracket is narrower than `xtol`. Returns the best point evaluated, so the
/// result never falls below f at the initial probes. Endpoints are not sampled.
template <class F>
SearchPoint golden_section_max(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c), fd = f(d);
    SearchPoint best = fc >= fd ? SearchPoint{c, fc} : SearchPoint{d, fd};
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
            if (fc > best.value) best = {c, fc};
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
            if (fd > best.value) best = {d, fd};
        }
    }
    return best;
}

}  // namespace confgruss
