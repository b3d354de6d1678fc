#pragma once

#include <cmath>

namespace tdesign {

/// Neumaier's variant of compensated summation: the correction also tracks
/// the case where the incoming term dominates the partial sum.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double term) {
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

/// Plain repeated multiplication. Moment code relies on every call site
/// producing identical bits for identical inputs, so there is exactly one
/// definition.
inline double ipow(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace tdesign
