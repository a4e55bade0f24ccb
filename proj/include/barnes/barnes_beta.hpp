#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>

#include "beta_params.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "quadrature.hpp"
#include "shintani.hpp"

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Mellin transform eta_{M,N}(q | a, b) = E[beta^q].
 *
 * direct_sn evaluates exp(S_N L_M(q) - S_N L_M(0)); levy_integral uses the
 * Levy-Khinchine exponent (Re q > -b_0); shintani uses the variant-1
 * product along the largest scale. eta(0) = 1 exactly for every method.
 */
inline EtaValue mellin_eta(BetaParams const& p,
                           cplx q,
                           QuadratureSpec const& quad = {},
                           EtaMethod method = EtaMethod::direct_sn)
{
    switch (method)
    {
        case EtaMethod::direct_sn:
            return eta_direct(p, q, quad);
        case EtaMethod::levy_integral:
            if (q != cplx(0.0))
                detail::check_eta_argument(p, q);
            return eta_levy(p, q, quad);
        case EtaMethod::shintani:
            return shintani_product(p, q, 1, {}, quad).eta;
    }
    detail::fail(Errc::Precondition, "unknown eta method");
}

//---------------------------------------------------------------------------//
/*!
 * P[beta = 1] = exp(-lambda) for the compound Poisson case M < N.
 */
inline double atom_probability(BetaParams const& p,
                               QuadratureSpec const& quad = {})
{
    p.require_probabilistic("atom_probability");
    if (p.M() >= p.N())
        detail::fail(Errc::NotCompoundPoisson,
                     "beta has no atom at 1 when M = N");
    return std::exp(-levy_mass(p, quad).value);
}

struct AsymptoticProfile
{
    std::optional<double> constant;  //!< lim eta(q), M < N
    std::optional<double> log_slope;  //!< coefficient of log q, M = N
};

/*!
 * Large-q behavior of eta: a constant limit for M < N and a power law with
 * exponent -b_1...b_N f(0) for M = N.
 */
inline AsymptoticProfile
asymptotic_profile(BetaParams const& p, QuadratureSpec const& quad = {})
{
    p.require_probabilistic("asymptotic_profile");
    AsymptoticProfile result;
    if (p.M() < p.N())
        result.constant = std::exp(-sn_log_gamma_zero(p, quad).value.real());
    else
        result.log_slope = -p.b_product() * p.gamma().f0();
    return result;
}

/*!
 * (S_N L_M)(0 | b), which is positive for M < N.
 */
inline double positivity_check(BetaParams const& p,
                               QuadratureSpec const& quad = {})
{
    p.require_probabilistic("positivity_check");
    detail::require(p.M() < p.N(),
                    Errc::Precondition,
                    "positivity_check requires M < N");
    auto const v = sn_log_gamma_zero(p, quad);
    if (v.value.real() <= -v.error)
    {
        std::ostringstream os;
        os << "S_N L_M(0|b) = " << v.value.real() << " is not positive";
        detail::fail(Errc::AssertionFailure, os.str());
    }
    return v.value.real();
}

//---------------------------------------------------------------------------//
/*!
 * eta(q) exp(-S_N L_{M-1}(q | a-hat_i, b)), which equals eta(q + a_i).
 * i is 0-based.
 */
inline EtaValue functional_equation_rhs(BetaParams const& p,
                                        cplx q,
                                        std::size_t i,
                                        QuadratureSpec const& quad = {})
{
    detail::require(p.M() >= 1, Errc::Precondition, "functional equation needs M >= 1");
    detail::require(i < p.M(), Errc::Precondition, "scale index out of range");
    auto const eta = eta_direct(p, q, quad);
    auto const lower = sn_log_gamma(p.gamma().without(i), p.shifts(), q, quad);
    cplx const value = eta.value * std::exp(-lower.value);
    return {value,
            EtaMethod::direct_sn,
            eta.est_error * std::abs(std::exp(-lower.value))
                + std::abs(value) * lower.error};
}

/*!
 * Absolute residuals |lhs - rhs| of the five symmetry identities:
 *  0. eta(q | b_0 + x) eta(x) = eta(q + x)
 *  1. eta(q) eta_{M,N-1}(q | b_0 + b_j, b-hat_j) = eta_{M,N-1}(q | b-hat_j)
 *  2. eta(q + a_i) eta_{M-1,N}(q | a-hat_i) = eta(q) eta(a_i)
 *  3. eta(q | b_j + a_i) eta_{M-1,N-1}(b_j | a-hat_i, b-hat_j)
 *       = eta(q) eta_{M-1,N-1}(q + b_j | a-hat_i, b-hat_j)
 *  4. eta(q + a_i) eta_{M-1,N-1}(q | a-hat_i, b-hat_j)
 *       = eta(q) eta_{M-1,N-1}(q + b_j | a-hat_i, b-hat_j)
 * i is 0-based, j is in 1..N, x >= 0.
 */
inline std::array<double, 5> symmetry_residuals(BetaParams const& p,
                                                cplx q,
                                                double x,
                                                std::size_t i,
                                                std::size_t j,
                                                QuadratureSpec const& quad = {})
{
    detail::require(p.M() >= 1 && p.N() >= 1,
                    Errc::Precondition,
                    "symmetry identities need M >= 1 and N >= 1");
    detail::require(i < p.M(), Errc::Precondition, "scale index out of range");
    detail::require(j >= 1 && j <= p.N(),
                    Errc::Precondition,
                    "b index must be in 1..N");
    detail::require(x >= 0, Errc::Precondition, "shift x must be non-negative");
    auto eta = [&](BetaParams const& params, cplx z) {
        return eta_direct(params, z, quad).value;
    };
    double const ai = p.gamma().scale(i);
    double const bj = p.b()[j];
    BetaParams const hat_b = p.without_b(j);
    BetaParams const hat_a = p.without_a(i);
    BetaParams const hat_ab = p.without_a_b(i, j);

    cplx const eq = eta(p, q);
    cplx const eq_ai = eta(p, q + ai);
    cplx const low_q_bj = eta(hat_ab, q + bj);

    std::array<double, 5> r{};
    r[0] = std::abs(eta(p.with_b0(p.b0() + x), q) * eta(p, x) - eta(p, q + x));
    r[1] = std::abs(eq * eta(hat_b.with_b0(p.b0() + bj), q) - eta(hat_b, q));
    r[2] = std::abs(eq_ai * eta(hat_a, q) - eq * eta(p, ai));
    r[3] = std::abs(eta(p.with_b(j, bj + ai), q) * eta(hat_ab, bj)
                    - eq * low_q_bj);
    r[4] = std::abs(eq_ai * eta(hat_ab, q) - eq * low_q_bj);
    return r;
}

//---------------------------------------------------------------------------//
struct SnValue
{
    cplx value;
    double scale = 0;  //!< sum of the magnitudes of the 2^N terms
};

/*!
 * (S_N B_n)(q | b) for the generalized Bernoulli polynomial of the gamma
 * parameters; zero for n < N and f(0) N! b_1...b_N for n = N.
 */
inline SnValue sn_bernoulli(BetaParams const& p, int n, cplx q)
{
    double scale = 0;
    cplx const value = s_operator(
        [&](cplx w) {
            cplx const v = bernoulli_poly(p.gamma(), n, w);
            scale += std::abs(v);
            return v;
        },
        q,
        p.shifts());
    return {value, scale};
}

}  // namespace barnes
