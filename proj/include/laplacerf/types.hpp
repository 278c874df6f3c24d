#pragma once

#include <complex>
#include <vector>

namespace laprf {

using cplx = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace laprf
