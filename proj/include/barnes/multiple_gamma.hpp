#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "gamma_params.hpp"
#include "quadrature.hpp"

namespace barnes
{
using cplx = std::complex<double>;

//---------------------------------------------------------------------------//
/*!
 * Complex argument together with its distance to the cut (-inf, 0].
 */
struct ComplexArg
{
    cplx value;

    ComplexArg(cplx w) : value(w) {}  // NOLINT(implicit)
    ComplexArg(double w) : value(w, 0.0) {}  // NOLINT(implicit)

    double cut_distance() const
    {
        return value.real() >= 0 ? std::abs(value) : std::abs(value.imag());
    }
};

//---------------------------------------------------------------------------//
// f(t) AND GENERALIZED BERNOULLI POLYNOMIALS
//---------------------------------------------------------------------------//
/*!
 * f(t) = t^M prod_j (1 - e^{-a_j t})^{-1} for t >= 0.
 */
inline double f_eval(GammaParams const& p, double t)
{
    detail::require(t >= 0, Errc::Precondition, "f_eval requires t >= 0");
    double result = 1;
    for (double a : p.scales())
    {
        double const u = a * t;
        result *= (u == 0 ? 1.0 : u / -std::expm1(-u)) / a;
    }
    return result;
}

//! Taylor coefficients c_0..c_order of f at zero
inline std::vector<double> taylor_coeffs_f(GammaParams const& p,
                                           std::size_t order)
{
    auto cached = p.taylor();
    if (order < cached.size())
        return {cached.begin(), cached.begin() + order + 1};
    return GammaParams::compute_taylor(p.scales(), order);
}

/*!
 * B^{(f)}_m(x) = d^m/dt^m [f(t) e^{-xt}] at t = 0.
 *
 * Evaluated as m! sum_k c_k (-x)^{m-k} / (m-k)! from the cached Taylor
 * coefficients.
 */
inline cplx bernoulli_poly(GammaParams const& p, int m, cplx x)
{
    auto c = p.taylor();
    detail::require(m >= 0, Errc::Precondition, "negative Bernoulli index");
    if (static_cast<std::size_t>(m) >= c.size())
    {
        std::ostringstream os;
        os << "Bernoulli index " << m << " beyond cached order "
           << c.size() - 1;
        detail::fail(Errc::BudgetExceeded, os.str());
    }
    // B_m = sum_j (-x)^j m!/j! c_{m-j}, Horner in (-x)
    cplx result = 0;
    cplx const mx = -x;
    double fact_m_over_j = 1;  // m!/j! for j = m downward
    for (int j = m; j >= 0; --j)
    {
        result = result * mx
                 + c[static_cast<std::size_t>(m - j)] * fact_m_over_j;
        if (j > 0)
            fact_m_over_j *= static_cast<double>(j);
    }
    return result;
}

//---------------------------------------------------------------------------//
// BARNES ZETA (direct lattice sum, oracle only)
//---------------------------------------------------------------------------//
struct ZetaValue
{
    cplx value;
    double error_bound;
};

namespace detail
{
// sum_{k>=0} (z + k a)^{-s} by Euler-Maclaurin with K explicit terms
inline ZetaValue hurwitz_line(cplx s, cplx z, double a)
{
    using std::abs;
    int const K = 12 + static_cast<int>(std::ceil(abs(s) + abs(z) / a));
    cplx sum = 0;
    for (int k = 0; k < K; ++k)
        sum += std::pow(z + static_cast<double>(k) * a, -s);
    cplx const zk = z + static_cast<double>(K) * a;
    sum += std::pow(zk, 1.0 - s) / (a * (s - 1.0));
    sum += 0.5 * std::pow(zk, -s);
    // - sum_j B_{2j}/(2j)! g^{(2j-1)}(K), g^{(r)} = (-s)_r a^r zk^{-s-r}
    cplx deriv_coeff = -s * a;  // (-s)(-s-1)...(-s-r+1) a^r for r = 1
    cplx last = 0;
    double fact = 2;  // (2j)!
    for (int j = 1; j <= 10; ++j)
    {
        int const r = 2 * j - 1;
        cplx const term = boost::math::bernoulli_b2n<double>(j) / fact
                          * deriv_coeff * std::pow(zk, -s - double(r));
        sum -= term;
        last = term;
        deriv_coeff *= (-s - double(r)) * a * (-s - double(r + 1)) * a;
        fact *= double(2 * j + 1) * double(2 * j + 2);
    }
    return {sum, abs(last)};
}
}  // namespace detail

/*!
 * Barnes zeta sum_{k} (w + k.a)^{-s} by direct lattice summation.
 *
 * The last coordinate is summed by Euler-Maclaurin; the remaining M-1
 * coordinates are summed over a simplex k'.a' <= R chosen from a
 * lattice-point counting bound so that the tail is below rel_tol.
 */
inline ZetaValue zeta_barnes(GammaParams const& p,
                             cplx s,
                             cplx w,
                             double rel_tol = 1e-12,
                             std::size_t point_budget = 20'000'000)
{
    std::size_t const M = p.order();
    double const sigma = s.real();
    if (!(sigma > static_cast<double>(M) + 1))
        detail::fail(Errc::OutOfOracleRegime,
                     "direct lattice sum requires Re(s) > M + 1");
    detail::require(w.real() > 0, Errc::Precondition, "requires Re(w) > 0");
    if (M == 0)
        return {std::pow(w, -s), 0.0};

    auto a = p.scales();
    double const aM = a[M - 1];
    std::size_t const Mp = M - 1;

    if (Mp == 0)
        return detail::hurwitz_line(s, w, aM);

    // Outer tail bound: terms are bounded by C (Re w + r)^{1-sigma} with
    // r = k'.a'; counting N(r) <= (r + A')^{M'} / (M'! prod a').
    double const rew = w.real();
    double const growth = std::exp(std::abs(s.imag()) * std::numbers::pi / 2);
    double A = 0, prod = 1, mfact = 1;
    for (std::size_t j = 0; j < Mp; ++j)
    {
        A += a[j];
        prod *= a[j];
        mfact *= static_cast<double>(j + 1);
    }
    double const c = std::max(1.0, A / rew);
    double const mp = static_cast<double>(Mp);
    auto tail_bound = [&](double R) {
        double const lead = growth * (1 / (aM * (sigma - 1)) + 1 / (rew + R));
        return lead * std::pow(c, mp) * (sigma - 1)
               * std::pow(rew + R, mp + 1 - sigma)
               / ((sigma - 1 - mp) * mfact * prod);
    };
    // Rough size of the full sum to scale the tolerance
    double const scale = std::pow(rew, 1 - sigma) / (aM * (sigma - 1));
    double R = 16 * std::max(1.0, A);
    while (tail_bound(R) > rel_tol * scale)
        R *= 2;

    cplx sum = 0;
    double err = 0;
    std::size_t points = 0;
    std::vector<int> k(Mp, 0);
    std::function<void(std::size_t, double)> recurse = [&](std::size_t dim,
                                                           double partial) {
        if (dim == Mp)
        {
            if (++points > point_budget)
                detail::fail(Errc::BudgetExceeded,
                             "lattice point budget exhausted");
            auto line = detail::hurwitz_line(s, w + partial, aM);
            sum += line.value;
            err += line.error_bound;
            return;
        }
        for (int kk = 0; partial + kk * a[dim] <= R; ++kk)
            recurse(dim + 1, partial + kk * a[dim]);
    };
    recurse(0, 0.0);
    return {sum, err + tail_bound(R)};
}

//---------------------------------------------------------------------------//
// POLES
//---------------------------------------------------------------------------//
/*!
 * Nearest pole of Gamma_M(.|a) within `radius` of w, with multiplicity.
 */
inline std::optional<PoleReport>
pole_query(GammaParams const& p, cplx w, double radius)
{
    detail::require(radius > 0, Errc::Precondition, "radius must be > 0");
    if (std::abs(w.imag()) > radius || w.real() > radius)
        return std::nullopt;
    std::size_t const M = p.order();
    double const bound = std::abs(w) + radius;
    auto a = p.scales();

    std::vector<double> points;
    std::function<void(std::size_t, double)> recurse = [&](std::size_t dim,
                                                           double partial) {
        if (dim == M)
        {
            if (points.size() > 10'000'000)
                detail::fail(Errc::BudgetExceeded, "pole enumeration");
            if (std::abs(w + partial) <= radius)
                points.push_back(partial);
            return;
        }
        for (int kk = 0; partial + kk * a[dim] <= bound; ++kk)
            recurse(dim + 1, partial + kk * a[dim]);
    };
    recurse(0, 0.0);
    if (points.empty())
        return std::nullopt;

    double best = points.front();
    for (double pt : points)
        if (std::abs(w + pt) < std::abs(w + best))
            best = pt;
    unsigned mult = 0;
    for (double pt : points)
        if (std::abs(pt - best) <= 1e-12 * (1 + best))
            ++mult;
    return PoleReport{cplx(-best, 0.0), mult};
}

//---------------------------------------------------------------------------//
// MALMSTEN INTEGRAND
//---------------------------------------------------------------------------//
inline double default_split_point(GammaParams const& p)
{
    double t0 = 0.5 * std::min(1.0, p.min_scale());
    // keep well inside the radius 2 pi / max a of the Taylor series of f
    return std::min(t0, 1.0 / p.max_scale());
}

inline double split_point(GammaParams const& p, QuadratureSpec const& q)
{
    return q.split_point > 0 ? q.split_point : default_split_point(p);
}

namespace detail
{
inline void check_series_budget(GammaParams const& p, QuadratureSpec const& q)
{
    int const M = static_cast<int>(p.order());
    require(q.series_order >= M + 10,
            Errc::Precondition,
            "series_order must be at least M + 10");
    require(static_cast<std::size_t>(M + 1 + q.series_order)
                < p.taylor().size(),
            Errc::BudgetExceeded,
            "series_order beyond cached Taylor coefficients");
}

//! sum_{i>=0} x^i / (i+j)!, the scaled remainder of exp after j terms
inline cplx exp_remainder_scaled(int j, cplx x)
{
    if (std::abs(x) < 2)
    {
        double fact = 1;
        for (int i = 2; i <= j; ++i)
            fact *= i;
        cplx term = 1.0 / fact;
        cplx sum = term;
        for (int i = 1; i < 60; ++i)
        {
            term *= x / double(i + j);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum))
                break;
        }
        return sum;
    }
    cplx poly = 0, term = 1;
    for (int i = 0; i < j; ++i)
    {
        poly += term;
        term *= x / double(i + 1);
    }
    return (std::exp(x) - poly) / std::pow(x, j);
}

//! (f(t) - sum_{n<=M} c_n t^n) / t^{M+1}
inline double f_remainder_scaled(GammaParams const& p,
                                 double t,
                                 double t0,
                                 int series_order)
{
    auto c = p.taylor();
    std::size_t const M = p.order();
    if (t < t0)
    {
        double sum = 0;
        for (int n = series_order; n >= 0; --n)
            sum = sum * t + c[M + 1 + static_cast<std::size_t>(n)];
        return sum;
    }
    double poly = 0;
    for (std::size_t n = M + 1; n-- > 0;)
        poly = poly * t + c[n];
    return (f_eval(p, t) - poly) / std::pow(t, static_cast<double>(M + 1));
}

/*!
 * Regular part of the Malmsten integrand on [0, 1]:
 * [e^{-wt} f(t) - T_M(e^{-wt} f)(t)] / t^{M+1}, where T_M is the degree-M
 * Taylor polynomial. Regrouped so that no term cancels as t -> 0.
 */
inline cplx malmsten_regular(GammaParams const& p,
                             cplx w,
                             double t,
                             double t0,
                             int series_order)
{
    auto c = p.taylor();
    int const M = static_cast<int>(p.order());
    cplx result = std::exp(-w * t) * f_remainder_scaled(p, t, t0, series_order);
    cplx const x = -w * t;
    cplx mw_pow = std::pow(-w, M + 1);  // (-w)^{M+1-m}, m = 0
    cplx const inv_mw = 1.0 / (-w);
    for (int m = 0; m <= M; ++m)
    {
        result += c[static_cast<std::size_t>(m)] * mw_pow
                  * exp_remainder_scaled(M + 1 - m, x);
        mw_pow *= inv_mw;
    }
    return result;
}

//! Literal Malmsten integrand evaluated directly (cancels as t -> 0)
inline cplx malmsten_integrand_direct(GammaParams const& p, cplx w, double t)
{
    int const M = static_cast<int>(p.order());
    cplx num = std::exp(-w * t) * f_eval(p, t);
    double tk_over_fact = 1;
    for (int k = 0; k < M; ++k)
    {
        num -= tk_over_fact * bernoulli_poly(p, k, w);
        tk_over_fact *= t / double(k + 1);
    }
    num -= tk_over_fact * std::exp(-t) * bernoulli_poly(p, M, w);
    return num / std::pow(t, double(M + 1));
}

//! Literal Malmsten integrand from the Taylor series of f(t) e^{-wt}
inline cplx
malmsten_integrand_series(GammaParams const& p, cplx w, double t, int order)
{
    int const M = static_cast<int>(p.order());
    // sum_{n>M} B_n t^{n-M-1}/n! + B_M/M! (1 - e^{-t})/t
    cplx sum = 0;
    double fact = 1;
    for (int n = 1; n <= M; ++n)
        fact *= n;
    double const fact_M = fact;
    double tp = 1;
    for (int n = M + 1; n <= M + 1 + order; ++n)
    {
        fact *= n;
        sum += bernoulli_poly(p, n, w) * tp / fact;
        tp *= t;
    }
    double const ein = t == 0 ? 1.0 : -std::expm1(-t) / t;
    return sum + bernoulli_poly(p, M, w) / fact_M * ein;
}
}  // namespace detail

/*!
 * The Malmsten integrand of L_M(w) at t > 0: Taylor series below the
 * split point, direct formula above it.
 */
inline cplx malmsten_integrand(GammaParams const& p,
                               cplx w,
                               double t,
                               QuadratureSpec const& quad = {})
{
    detail::check_series_budget(p, quad);
    if (t < split_point(p, quad))
        return detail::malmsten_integrand_series(p, w, t, quad.series_order);
    return detail::malmsten_integrand_direct(p, w, t);
}

//---------------------------------------------------------------------------//
// MULTIPLE LOG-GAMMA
//---------------------------------------------------------------------------//
struct LogGammaValue
{
    cplx value;
    double error;
};

namespace detail
{
inline double integral_threshold(GammaParams const& p, cplx w)
{
    return std::max(0.5 * std::min(1.0, p.max_scale()),
                    0.2 * std::abs(w.imag()));
}

/*!
 * Malmsten integral for Re(w) large enough that the tail decays.
 *
 * Split at t = 1: on [0, 1] integrate the regular remainder, on [1, inf)
 * integrate e^{-wt} f(t) / t^{M+1}; the polynomial subtraction terms and
 * the e^{-t} term integrate in closed form and leave
 *   - sum_{k<M} B_k(w) / (k! (M-k)) + gamma_E B_M(w) / M!.
 */
inline LogGammaValue
log_gamma_integral(GammaParams const& p, cplx w, QuadratureSpec const& quad)
{
    int const M = static_cast<int>(p.order());
    double const t0 = split_point(p, quad);
    auto const head = integrate_interval(
        [&](double t) {
            return malmsten_regular(p, w, t, t0, quad.series_order);
        },
        0.0,
        1.0,
        quad);
    auto a = p.scales();
    auto const tail = integrate_to_infinity(
        [&](double t) {
            double denom = t;
            for (double aj : a)
                denom *= -std::expm1(-aj * t);
            return cplx(std::exp(-w * t) / denom);
        },
        1.0,
        quad);

    cplx poly = 0;
    double poly_mag = 0;
    double fact = 1;
    for (int k = 0; k < M; ++k)
    {
        cplx const term = bernoulli_poly(p, k, w) / (fact * double(M - k));
        poly += term;
        poly_mag += std::abs(term);
        fact *= double(k + 1);
    }
    cplx const euler = std::numbers::egamma * bernoulli_poly(p, M, w) / fact;
    cplx const value = head.value + tail.value - poly + euler;
    double const rounding = 8 * std::numeric_limits<double>::epsilon()
                            * (poly_mag + std::abs(euler));
    return {value, head.error + tail.error + rounding};
}

inline LogGammaValue log_gamma_unchecked(GammaParams const& p,
                                         cplx w,
                                         QuadratureSpec const& quad,
                                         int& shift_budget)
{
    if (p.order() == 0)
        return {-std::log(w), 4 * std::numeric_limits<double>::epsilon()};
    if (w.real() >= integral_threshold(p, w))
        return log_gamma_integral(p, w, quad);

    // L_M(w) = L_{M-1}(w | a-hat_i) + L_M(w + a_i), shifting along the
    // largest scale for the fewest steps.
    std::size_t const i = p.argmax_scale();
    double const ai = p.scale(i);
    GammaParams const lower = p.without(i);
    LogGammaValue acc{0.0, 0.0};
    cplx shifted = w;
    while (shifted.real() < integral_threshold(p, shifted))
    {
        if (--shift_budget < 0)
            fail(Errc::BudgetExceeded, "continuation shift budget exhausted");
        auto const piece = log_gamma_unchecked(lower, shifted, quad, shift_budget);
        acc.value += piece.value;
        acc.error += piece.error;
        shifted += ai;
    }
    auto const top = log_gamma_integral(p, shifted, quad);
    return {acc.value + top.value, acc.error + top.error};
}

inline double pole_tolerance(cplx w)
{
    return 1e-8 * (1 + std::abs(w));
}
}  // namespace detail

/*!
 * L_M(w|a) with its estimated absolute error.
 *
 * Re(w) at or above a threshold uses the Malmsten integral directly;
 * otherwise the functional equation shifts w to the right, which also
 * continues L_M across the left half plane with the principal logarithm
 * for L_0.
 */
inline LogGammaValue log_gamma_m_with_error(GammaParams const& p,
                                            ComplexArg w,
                                            QuadratureSpec const& quad = {})
{
    detail::check_series_budget(p, quad);
    cplx const z = w.value;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        detail::fail(Errc::Precondition, "non-finite argument");
    if (auto pole = pole_query(p, z, detail::pole_tolerance(z)))
    {
        std::ostringstream os;
        os << "argument " << z << " within pole tolerance of "
           << pole->location.real() << " (multiplicity "
           << pole->multiplicity << ")";
        throw Error(*pole, os.str());
    }
    if (z.imag() == 0 && z.real() <= 0)
    {
        std::ostringstream os;
        os << "argument " << z.real() << " lies on the cut (-inf, 0]";
        detail::fail(Errc::OnCut, os.str());
    }
    int budget = 100'000;
    return detail::log_gamma_unchecked(p, z, quad, budget);
}

inline cplx log_gamma_m(GammaParams const& p,
                        ComplexArg w,
                        QuadratureSpec const& quad = {})
{
    return log_gamma_m_with_error(p, w, quad).value;
}

//! Gamma_M(w|a) = exp(L_M(w|a)); never zero
inline cplx gamma_m(GammaParams const& p,
                    ComplexArg w,
                    QuadratureSpec const& quad = {})
{
    return std::exp(log_gamma_m(p, w, quad));
}

//---------------------------------------------------------------------------//
/*!
 * Large-|w| expansion of L_M(w) (diagnostic only).
 *
 * The error scale is the magnitude of the first two omitted terms
 * c_n (n-M-1)! w^{M-n} of the Watson-lemma expansion; no rigorous
 * constant is known.
 */
struct AsymptoticValue
{
    cplx value;
    double error_scale;
};

inline AsymptoticValue log_gamma_asymptotic(GammaParams const& p, cplx w)
{
    if (w == cplx(0) || (w.imag() == 0 && w.real() < 0))
        detail::fail(Errc::ArgOutOfRange, "requires |arg(w)| < pi, w != 0");
    int const M = static_cast<int>(p.order());
    double fact_M = 1;
    for (int k = 2; k <= M; ++k)
        fact_M *= k;
    cplx value = -bernoulli_poly(p, M, w) * std::log(w) / fact_M;

    double fact_k = 1;
    for (int k = 0; k <= M; ++k)
    {
        if (k > 0)
            fact_k *= k;
        double harmonic = 0;
        double fact_mk = 1;
        for (int l = 1; l <= M - k; ++l)
        {
            harmonic += 1.0 / l;
            fact_mk *= l;
        }
        if (harmonic == 0)
            continue;
        value += bernoulli_poly(p, k, 0.0) * std::pow(-w, M - k)
                 / (fact_k * fact_mk) * harmonic;
    }

    auto c = p.taylor();
    double scale = 0;
    double fact = 1;  // (n-M-1)!
    for (int n = M + 1; n <= M + 2; ++n)
    {
        if (n > M + 1)
            fact *= n - M - 1;
        scale += std::abs(c[static_cast<std::size_t>(n)]) * fact
                 * std::pow(std::abs(w), M - n);
    }
    return {value, scale};
}

}  // namespace barnes
