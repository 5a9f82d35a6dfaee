#include "ldtk/legendre.hpp"

#include "ldtk/error.hpp"

#include <cmath>
#include <sstream>

namespace ldtk {

LegendrePoint legendre_by_bisection(const std::function<double(double)>& mu,
                                    const std::function<double(double)>& dmu, double q, double lo,
                                    double hi)
{
    double dlo = dmu(lo), dhi = dmu(hi);
    if (!(q > dlo && q < dhi)) {
        std::ostringstream os;
        os.precision(17);
        os << "q = " << q << " outside (" << dlo << ", " << dhi << ") on lambda window [" << lo << ", "
           << hi << "]";
        fail(ErrorCode::QOutOfRange, os.str());
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (dmu(mid) < q)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    double lam = 0.5 * (lo + hi);
    return {lam, lam * q - mu(lam)};
}

}  // namespace ldtk
