#pragma once

#include <functional>

namespace ldtk {

struct LegendrePoint {
    double lambda = 0.0;  // maximizer
    double value = 0.0;   // lambda q - mu(lambda)
};

// Legendre transform of a convex mu at q by bisection on a nondecreasing mu'.
// QOutOfRange if q is not inside (dmu(lo), dmu(hi)).
LegendrePoint legendre_by_bisection(const std::function<double(double)>& mu,
                                    const std::function<double(double)>& dmu, double q, double lo,
                                    double hi);

}  // namespace ldtk
