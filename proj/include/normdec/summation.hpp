#pragma once

#include <cmath>

namespace normdec {

/// Neumaier compensated accumulator; keeps long expectation sums at
/// machine-epsilon relative error regardless of term count.
struct CompensatedSum {
    double sum{0.0};
    double comp{0.0};

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace normdec
