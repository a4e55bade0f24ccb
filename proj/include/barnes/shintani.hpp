#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include "beta_params.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "quadrature.hpp"
#include "s_operator.hpp"

namespace barnes
{
struct ShintaniOptions
{
    //! Scale i of the factorization; the largest scale when empty
    std::optional<std::size_t> i;
    //! Truncation K is doubled until the tail exponent is below this
    double tail_tol = 1e-2;
    std::size_t max_factors = std::size_t{1} << 16;
    //! Multiply the truncated product by the tail factor
    bool tail_correction = true;
};

struct ShintaniValue
{
    EtaValue eta;  //!< product of K factors times the tail factor
    cplx truncated;  //!< product of the first K factors only
    cplx tail_log;  //!< log of the omitted factors k >= K
    std::size_t K = 0;
};

namespace detail
{
/*!
 * log of factor k of the Shintani product, in one of the three forms.
 */
inline LogGammaValue shintani_factor_log(BetaParams const& p,
                                         GammaParams const& lower,
                                         std::size_t i,
                                         int variant,
                                         std::size_t j,
                                         cplx q,
                                         std::size_t k,
                                         QuadratureSpec const& quad)
{
    double const ka = static_cast<double>(k) * p.gamma().scale(i);
    auto diff = [](LogGammaValue x, LogGammaValue y) {
        return LogGammaValue{x.value - y.value, x.error + y.error};
    };
    if (variant == 1)
    {
        // eta_{M-1,N}(q | a-hat_i, b_0 + k a_i)
        std::vector<double> b(p.b().begin(), p.b().end());
        b[0] += ka;
        auto const shifts = subset_shifts(b);
        return diff(sn_log_gamma(lower, shifts, q, quad),
                    sn_log_gamma(lower, shifts, 0.0, quad));
    }
    if (variant == 2)
    {
        return diff(sn_log_gamma(lower, p.shifts(), q + ka, quad),
                    sn_log_gamma(lower, p.shifts(), cplx(ka), quad));
    }
    std::vector<double> b(p.b().begin(), p.b().end());
    double const bj = b[j];
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(j));
    auto const shifts = subset_shifts(b);
    auto const first = diff(sn_log_gamma(lower, shifts, q + ka, quad),
                            sn_log_gamma(lower, shifts, cplx(ka), quad));
    auto const second = diff(sn_log_gamma(lower, shifts, q + ka + bj, quad),
                             sn_log_gamma(lower, shifts, cplx(ka + bj), quad));
    return diff(first, second);
}

/*!
 * log prod_{k >= K} of the Shintani factors: the Levy exponent with the
 * extra weight e^{-K a_i t}.
 */
inline QuadResult<cplx> shintani_tail_log(BetaParams const& p,
                                          std::size_t i,
                                          cplx q,
                                          std::size_t K,
                                          QuadratureSpec const& quad)
{
    if (!(q.real() > -p.min_shift()))
        fail(Errc::MethodDomain,
             "Shintani tail estimate requires Re(q) > -b_0");
    double const Ka = static_cast<double>(K) * p.gamma().scale(i);
    return integrate_half_line(
        [&](double t) {
            return levy_integrand(p, q, t, Ka);
        },
        quad);
}
}  // namespace detail

/*!
 * eta_{M,N}(q) as the Shintani product along the scale a_i.
 *
 * variant 1: prod_k eta_{M-1,N}(q | a-hat_i, b_0 + k a_i)
 * variant 2: prod_k eta_{M-1,N}(q + k a_i | a-hat_i, b)
 *                 / eta_{M-1,N}(k a_i | a-hat_i, b)
 * variant 3: the (M-1, N-1) ratio form with b_j removed.
 *
 * The factors tend to 1 only algebraically in k, so the omitted factors
 * are evaluated as a single Levy-type integral and multiplied in.
 */
inline ShintaniValue shintani_product(BetaParams const& p,
                                      cplx q,
                                      int variant = 1,
                                      std::optional<std::size_t> j = {},
                                      QuadratureSpec const& quad = {},
                                      ShintaniOptions const& opts = {})
{
    detail::require(p.M() >= 1, Errc::Precondition, "Shintani product needs M >= 1");
    detail::require(variant >= 1 && variant <= 3,
                    Errc::Precondition,
                    "Shintani variant must be 1, 2 or 3");
    if (variant == 3)
        detail::require(j && *j >= 1 && *j <= p.N(),
                        Errc::Precondition,
                        "Shintani variant 3 needs an index j in 1..N");
    std::size_t const i = opts.i.value_or(p.gamma().argmax_scale());
    detail::require(i < p.M(), Errc::Precondition, "scale index out of range");

    ShintaniValue result;
    if (q == cplx(0.0))
    {
        result.eta = {1.0, EtaMethod::shintani, 0.0};
        result.truncated = 1.0;
        return result;
    }
    detail::check_eta_argument(p, q);

    GammaParams const lower = p.gamma().without(i);
    double const ai = p.gamma().scale(i);
    auto K = static_cast<std::size_t>(
        std::ceil(50.0 / ai * std::max(1.0, std::abs(q))));

    LogGammaValue acc{0.0, 0.0};
    std::size_t done = 0;
    QuadResult<cplx> tail{};
    while (true)
    {
        if (K > opts.max_factors)
        {
            std::ostringstream os;
            os << "Shintani product: tail exponent " << std::abs(tail.value)
               << " above " << opts.tail_tol << " at K = " << done;
            detail::fail(Errc::NonConvergence, os.str());
        }
        for (; done < K; ++done)
        {
            auto const f = detail::shintani_factor_log(
                p, lower, i, variant, j.value_or(1), q, done, quad);
            acc.value += f.value;
            acc.error += f.error;
        }
        tail = detail::shintani_tail_log(p, i, q, K, quad);
        if (std::abs(tail.value) < opts.tail_tol)
            break;
        K *= 2;
    }

    cplx const log_value = opts.tail_correction ? acc.value + tail.value
                                                : acc.value;
    double const log_error = opts.tail_correction
                                 ? acc.error + tail.error
                                 : acc.error + std::abs(tail.value);
    cplx const value = std::exp(log_value);
    result.eta = {value, EtaMethod::shintani, std::abs(value) * log_error};
    result.truncated = std::exp(acc.value);
    result.tail_log = tail.value;
    result.K = K;
    return result;
}

/*!
 * For b_j = n a_i, the n parameter sets (a-hat_i; b_0 + k a_i, b-hat_j),
 * k = 0..n-1, whose product of independent variables has the law of the
 * input. i is 0-based, j is in 1..N.
 */
inline std::vector<BetaParams>
reduction_factors(BetaParams const& p, std::size_t i, std::size_t j)
{
    detail::require(i < p.M(), Errc::Precondition, "scale index out of range");
    detail::require(j >= 1 && j <= p.N(),
                    Errc::Precondition,
                    "b index must be in 1..N");
    double const ai = p.gamma().scale(i);
    double const ratio = p.b()[j] / ai;
    double const n = std::round(ratio);
    if (!(std::abs(ratio - n) < 1e-12 * (1 + std::abs(ratio))) || n < 1)
    {
        std::ostringstream os;
        os.precision(17);
        os << "b_" << j << " / a_" << i + 1 << " = " << ratio
           << " is not a positive integer";
        detail::fail(Errc::NotMultiple, os.str());
    }
    BetaParams const base = p.without_a_b(i, j);
    std::vector<BetaParams> result;
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k)
        result.push_back(base.with_b0(p.b0() + static_cast<double>(k) * ai));
    return result;
}

}  // namespace barnes
