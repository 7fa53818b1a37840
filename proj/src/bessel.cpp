// bessel.cpp: Miller recurrence for J_k(x)

#include "spinbath/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinbath {

std::vector<double> bessel_j_sequence(double x, int kmax) {
    if (kmax < 0) {
        throw std::invalid_argument("bessel_j_sequence: kmax must be non-negative");
    }
    if (!std::isfinite(x)) {
        throw std::invalid_argument("bessel_j_sequence: non-finite argument");
    }
    std::vector<double> j(static_cast<std::size_t>(kmax) + 1, 0.0);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        j[0] = 1.0;
        return j;
    }

    // Start far enough above both kmax and x that the dominant (Y-like)
    // solution has died out by the time we reach kmax.
    const int top = std::max(kmax, static_cast<int>(ax));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    start += start % 2;

    const double big = 1e250;
    const double two_over_x = 2.0 / ax;
    double jp1 = 0.0; // J_{k+1}
    double jk = 1e-300; // J_k, arbitrary seed
    double norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double jm1 = k * two_over_x * jk - jp1;
        jp1 = jk;
        jk = jm1;
        // jk now holds J_{k-1}
        if (k - 1 <= kmax) {
            j[static_cast<std::size_t>(k - 1)] = jk;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            norm += 2.0 * jk;
        }
        if (std::abs(jk) > big) {
            jk /= big;
            jp1 /= big;
            norm /= big;
            for (int m = k - 1; m <= kmax; ++m) {
                j[static_cast<std::size_t>(m)] /= big;
            }
        }
    }
    norm += jk; // J_0
    // values above start were never touched; they stay zero
    for (auto& v : j) {
        v /= norm;
    }
    if (x < 0.0) {
        for (std::size_t k = 1; k < j.size(); k += 2) {
            j[k] = -j[k];
        }
    }
    return j;
}

} // namespace spinbath
