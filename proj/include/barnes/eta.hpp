#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>

#include "beta_params.hpp"
#include "error.hpp"
#include "multiple_gamma.hpp"
#include "quadrature.hpp"
#include "s_operator.hpp"

namespace barnes
{
//---------------------------------------------------------------------------//
enum class EtaMethod
{
    direct_sn,
    levy_integral,
    shintani,
};

inline char const* to_string(EtaMethod m)
{
    switch (m)
    {
        case EtaMethod::direct_sn:
            return "direct-SN";
        case EtaMethod::levy_integral:
            return "levy-integral";
        case EtaMethod::shintani:
            return "shintani-K";
    }
    return "unknown";
}

struct EtaValue
{
    cplx value;
    EtaMethod method = EtaMethod::direct_sn;
    double est_error = 0;  //!< absolute
};

//---------------------------------------------------------------------------//
// S_N L_M
//---------------------------------------------------------------------------//
/*!
 * (S_N L_M)(q | a, b) for an explicit gamma and subset list, with the
 * accumulated error of the 2^N log-gamma evaluations.
 */
inline LogGammaValue sn_log_gamma(GammaParams const& gamma,
                                  std::span<SubsetShift const> shifts,
                                  cplx q,
                                  QuadratureSpec const& quad = {})
{
    double err = 0;
    cplx const value = s_operator(
        [&](cplx w) {
            auto r = log_gamma_m_with_error(gamma, w, quad);
            err += r.error;
            return r.value;
        },
        q,
        shifts);
    return {value, err};
}

inline LogGammaValue
sn_log_gamma(BetaParams const& p, cplx q, QuadratureSpec const& quad = {})
{
    return sn_log_gamma(p.gamma(), p.shifts(), q, quad);
}

//! (S_N L_M)(0 | a, b), cached on the parameters
inline LogGammaValue
sn_log_gamma_zero(BetaParams const& p, QuadratureSpec const& quad = {})
{
    return p.cached_sn_zero(quad,
                            [&] { return sn_log_gamma(p, cplx(0.0), quad); });
}

namespace detail
{
inline void check_eta_argument(BetaParams const& p, cplx q)
{
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()))
        fail(Errc::Precondition, "non-finite q");
    if (q.imag() == 0 && q.real() <= -p.min_shift())
    {
        std::ostringstream os;
        os << "q = " << q.real() << " lies on the cut (-inf, "
           << -p.min_shift() << "]";
        fail(Errc::OnCut, os.str());
    }
}

//! exp(z) - 1 without cancellation for small |z|
inline cplx expm1(cplx z)
{
    double const x = z.real(), y = z.imag();
    double const s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}
}  // namespace detail

/*!
 * eta_{M,N}(q) = exp(S_N L_M(q) - S_N L_M(0)) by direct evaluation of the
 * 2^N multiple log-gammas.
 */
inline EtaValue
eta_direct(BetaParams const& p, cplx q, QuadratureSpec const& quad = {})
{
    if (q == cplx(0.0))
        return {1.0, EtaMethod::direct_sn, 0.0};
    detail::check_eta_argument(p, q);
    auto const lq = sn_log_gamma(p, q, quad);
    auto const l0 = sn_log_gamma_zero(p, quad);
    cplx const value = std::exp(lq.value - l0.value);
    return {value, EtaMethod::direct_sn, std::abs(value) * (lq.error + l0.error)};
}

//---------------------------------------------------------------------------//
// LEVY MEASURE
//---------------------------------------------------------------------------//
namespace detail
{
//! k(t) e^{b_0 t}: the ratio of the b_j and a_i factors
inline double levy_ratio(BetaParams const& p, double t)
{
    std::size_t const M = p.M(), N = p.N();
    auto const a = p.gamma().scales();
    auto const b = p.b();
    // Interleave numerator and denominator factors so that neither
    // underflows for small t.
    double r = 1;
    for (std::size_t n = 0; n < std::max(M, N); ++n)
    {
        if (n < N)
            r *= -std::expm1(-b[n + 1] * t);
        if (n < M)
            r /= -std::expm1(-a[n] * t);
    }
    return r;
}

/*!
 * (e^{-qt} - 1) e^{-decay t} k(t) / t, arranged so that neither the small-t
 * difference nor a growing e^{-qt} against a vanishing k(t) loses accuracy.
 */
inline cplx levy_integrand(BetaParams const& p, cplx q, double t, double decay)
{
    double const rate = p.b0() + decay;
    if ((p.min_shift() + decay + std::min(0.0, q.real())) * t > 740)
        return 0.0;
    double const r = levy_ratio(p, t) / t;
    if (std::abs(q) * t < 1)
        return expm1(-q * t) * (std::exp(-rate * t) * r);
    return (std::exp(-(q + rate) * t) - std::exp(-rate * t)) * r;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * k(t) = e^{-b_0 t} prod_j (1 - e^{-b_j t}) / prod_i (1 - e^{-a_i t}), the
 * density of the Levy measure of -log beta against dt/t.
 */
inline double levy_density(BetaParams const& p, double t)
{
    std::size_t const M = p.M(), N = p.N();
    if (t == 0)
    {
        if (N > M)
            return 0;
        if (N < M)
            return std::numeric_limits<double>::infinity();
        return p.b_product() * p.gamma().f0();
    }
    return std::exp(-p.b0() * t) * detail::levy_ratio(p, t);
}

/*!
 * Levy measure k(t) dt / t of -log beta_{M,N}.
 *
 * The total mass is finite exactly when M < N; k(t) ~ c t^{N-M} as t -> 0.
 */
struct LevySpec
{
    BetaParams params;
    std::optional<double> total_mass;  //!< empty when infinite
    double mass_error = 0;
    int small_t_exponent = 0;

    double density(double t) const { return levy_density(params, t); }
};

//! lambda = int_0^inf k(t) / t dt for M < N
inline QuadResult<double>
levy_mass(BetaParams const& p, QuadratureSpec const& quad = {})
{
    detail::require(p.M() < p.N(),
                    Errc::NotCompoundPoisson,
                    "Levy mass is infinite when M = N");
    return integrate_half_line(
        [&](double t) { return levy_density(p, t) / t; }, quad);
}

inline LevySpec levy_spec(BetaParams const& p, QuadratureSpec const& quad = {})
{
    LevySpec spec{p, std::nullopt, 0.0,
                  static_cast<int>(p.N()) - static_cast<int>(p.M())};
    if (p.M() < p.N())
    {
        auto const mass = levy_mass(p, quad);
        spec.total_mass = mass.value;
        spec.mass_error = mass.error;
    }
    return spec;
}

/*!
 * log eta(q) = int_0^inf (e^{-qt} - 1) k(t) dt / t, for Re(q) > -b_0 (the
 * smallest subset sum in analytic mode).
 */
inline QuadResult<cplx>
levy_exponent_with_error(BetaParams const& p,
                         cplx q,
                         QuadratureSpec const& quad = {})
{
    if (q == cplx(0.0))
        return {0.0, 0.0, 0.0};
    if (!(q.real() > -p.min_shift()))
    {
        std::ostringstream os;
        os << "Levy integral requires Re(q) > " << -p.min_shift();
        detail::fail(Errc::MethodDomain, os.str());
    }
    return integrate_half_line(
        [&](double t) {
            return detail::levy_integrand(p, q, t, 0.0);
        },
        quad);
}

inline cplx
levy_exponent(BetaParams const& p, cplx q, QuadratureSpec const& quad = {})
{
    return levy_exponent_with_error(p, q, quad).value;
}

inline EtaValue
eta_levy(BetaParams const& p, cplx q, QuadratureSpec const& quad = {})
{
    auto const r = levy_exponent_with_error(p, q, quad);
    cplx const value = std::exp(r.value);
    return {value, EtaMethod::levy_integral, std::abs(value) * r.error};
}

}  // namespace barnes
