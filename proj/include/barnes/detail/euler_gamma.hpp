#pragma once

#include <boost/math/special_functions/bernoulli.hpp>

#include <cmath>
#include <complex>
#include <numbers>

namespace barnes::detail
{
//---------------------------------------------------------------------------//
/*!
 * log Gamma(z) for complex z.
 *
 * For Re z >= 1/2 the argument is shifted to Re z >= 15 and Stirling's
 * series is applied; the sum of principal logs of the shifted factors keeps
 * the result on the branch continuous from the positive axis. For
 * Re z < 1/2 the reflection formula is used, which gives a valid logarithm
 * of Gamma(z) but not necessarily the continuous branch.
 */
inline std::complex<double> log_gamma_complex(std::complex<double> z)
{
    using cplx = std::complex<double>;
    constexpr double pi = std::numbers::pi;
    if (z.real() < 0.5)
    {
        cplx const s = std::sin(pi * z);
        return std::log(pi) - std::log(s) - log_gamma_complex(1.0 - z);
    }
    cplx shift_log = 0;
    while (z.real() < 15)
    {
        shift_log += std::log(z);
        z += 1.0;
    }
    cplx const inv = 1.0 / z;
    cplx const inv2 = inv * inv;
    cplx series = 0;
    cplx pw = inv;
    for (int k = 1; k <= 10; ++k)
    {
        double const b2k = boost::math::bernoulli_b2n<double>(k);
        series += b2k / (2.0 * k * (2.0 * k - 1)) * pw;
        pw *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) + series
           - shift_log;
}

inline std::complex<double> gamma_complex(std::complex<double> z)
{
    return std::exp(log_gamma_complex(z));
}

}  // namespace barnes::detail
