// bessel.hpp: integer-order Bessel functions of the first kind

#pragma once

#include <vector>

namespace spinbath {

// J_0(x) .. J_kmax(x) by Miller's downward recurrence, normalized with
// J_0 + 2 sum_k J_2k = 1. Accurate to a few ulp of max|J| for any real x.
std::vector<double> bessel_j_sequence(double x, int kmax);

} // namespace spinbath
