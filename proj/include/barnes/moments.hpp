#pragma once

#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "beta_params.hpp"
#include "detail/euler_gamma.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "quadrature.hpp"

namespace barnes
{
enum class MomentSign
{
    positive,
    negative,
};

//---------------------------------------------------------------------------//
/*!
 * E[beta^{k a_i}] (positive) or E[beta^{-k a_i}] (negative) as a finite
 * product of (M-1)-order factors. i is 0-based.
 */
inline double integer_moments(BetaParams const& p,
                              std::size_t i,
                              std::size_t k,
                              MomentSign sign,
                              QuadratureSpec const& quad = {})
{
    detail::require(p.M() >= 1, Errc::Precondition, "moments need M >= 1");
    detail::require(i < p.M(), Errc::Precondition, "scale index out of range");
    double const ai = p.gamma().scale(i);
    if (sign == MomentSign::negative
        && !(static_cast<double>(k) * ai < p.min_shift()))
    {
        std::ostringstream os;
        os << "negative moment k a_i = " << static_cast<double>(k) * ai
           << " must be below b_0 = " << p.min_shift();
        detail::fail(Errc::MomentDomain, os.str());
    }
    GammaParams const lower = p.gamma().without(i);
    double sum = 0;
    for (std::size_t l = 0; l < k; ++l)
    {
        double const dl = static_cast<double>(l);
        if (sign == MomentSign::positive)
            sum -= sn_log_gamma(lower, p.shifts(), cplx(dl * ai), quad).value.real();
        else
            sum += sn_log_gamma(lower, p.shifts(), cplx(-(dl + 1) * ai), quad)
                       .value.real();
    }
    return std::exp(sum);
}

//---------------------------------------------------------------------------//
/*!
 * Power series sum_k (-x)^k / k! E[beta^{k a_i}] for the Laplace transform
 * of beta^{a_i}, with the moment sequence computed once and reused across
 * x.
 *
 * Truncation after term K uses the bound
 *   m_{K+1} x^{K+1} / (K+1)! / (1 - x / (K+2)),
 * valid because the moments m_k of a (0,1]-valued variable do not increase.
 * The terms grow like e^x before they shrink, so for large x the sum is
 * dominated by cancellation; NonConvergence is raised once the rounding
 * estimate (which uses the quadrature error of every moment) passes 1% of
 * the result.
 */
class LaplaceSeries
{
  public:
    struct Result
    {
        double value = 0;
        std::size_t terms = 0;
        double bound = 0;  //!< truncation bound on the omitted terms
        double rounding = 0;  //!< cancellation error of the alternating sum
    };

    LaplaceSeries(BetaParams p,
                  std::size_t i,
                  QuadratureSpec quad = {},
                  std::size_t max_terms = 2000)
        : p_(std::move(p)), i_(i), quad_(quad), max_terms_(max_terms)
    {
        p_.require_probabilistic("laplace_series");
        detail::require(p_.M() >= 1, Errc::Precondition, "Laplace series needs M >= 1");
        detail::require(i_ < p_.M(), Errc::Precondition, "scale index out of range");
        lower_ = p_.gamma().without(i_);
        log_moments_.push_back(0.0);
        log_errors_.push_back(0.0);
    }

    //! log E[beta^{k a_i}]
    double log_moment(std::size_t k) const
    {
        double const ai = p_.gamma().scale(i_);
        while (log_moments_.size() <= k)
        {
            std::size_t const l = log_moments_.size() - 1;
            auto const step = sn_log_gamma(lower_,
                                           p_.shifts(),
                                           cplx(static_cast<double>(l) * ai),
                                           quad_);
            log_moments_.push_back(log_moments_.back() - step.value.real());
            log_errors_.push_back(log_errors_.back() + step.error);
        }
        return log_moments_[k];
    }

    Result operator()(double x) const
    {
        detail::require(x >= 0 && std::isfinite(x),
                        Errc::Precondition,
                        "Laplace series needs finite x >= 0");
        Result r;
        if (x == 0)
        {
            r.value = 1;
            r.terms = 1;
            return r;
        }
        double const logx = std::log(x);
        double sum = 0, rounding = 0;
        constexpr double eps = std::numeric_limits<double>::epsilon();
        for (std::size_t k = 0; k <= max_terms_; ++k)
        {
            double const dk = static_cast<double>(k);
            double const mag
                = std::exp(dk * logx - std::lgamma(dk + 1) + log_moment(k));
            sum += (k % 2 == 0) ? mag : -mag;
            rounding += mag * (log_errors_[k] + (dk + 2) * eps);
            if (dk + 2 > x)
            {
                double const next = std::exp((dk + 1) * logx
                                             - std::lgamma(dk + 2)
                                             + log_moment(k + 1));
                double const bound = next / (1 - x / (dk + 2));
                if (bound <= 1e-16 * std::abs(sum)
                    || bound < std::numeric_limits<double>::min())
                {
                    if (!(rounding <= 1e-2 * std::abs(sum)))
                    {
                        std::ostringstream os;
                        os << "Laplace series at x = " << x
                           << " lost precision to cancellation (error "
                           << rounding << ", value " << sum << ")";
                        detail::fail(Errc::NonConvergence, os.str());
                    }
                    r.value = sum;
                    r.terms = k + 1;
                    r.bound = bound;
                    r.rounding = rounding;
                    return r;
                }
            }
        }
        std::ostringstream os;
        os << "Laplace series at x = " << x << " not converged after "
           << max_terms_ << " terms";
        detail::fail(Errc::NonConvergence, os.str());
    }

    BetaParams const& params() const { return p_; }
    std::size_t index() const { return i_; }

  private:
    BetaParams p_;
    std::size_t i_;
    QuadratureSpec quad_;
    std::size_t max_terms_;
    GammaParams lower_;
    mutable std::vector<double> log_moments_;
    mutable std::vector<double> log_errors_;
};

//! E[exp(-x beta^{a_i})]
inline double laplace_series(BetaParams const& p,
                             std::size_t i,
                             double x,
                             QuadratureSpec const& quad = {})
{
    return LaplaceSeries(p, i, quad)(x).value;
}

//---------------------------------------------------------------------------//
struct RamanujanResult
{
    double lhs = 0;  //!< int_0^inf x^{q-1} L(x) dx
    double rhs = 0;  //!< Gamma(q) eta(-q a_i)
    double rel_diff = 0;
    double split = 0;  //!< series used on [0, split]
    double contour = 0;  //!< abscissa of the tail contour
};

/*!
 * Compare int_0^inf x^{q-1} L(x) dx with Gamma(q) eta(-q a_i).
 *
 * L(x) decays only algebraically, like x^{-b_0/a_i}, so the integral is
 * split at X: the power series is integrated on [0, X] and the tail
 * int_X^inf x^{q-1} L(x) dx is written through the inverse Mellin
 * transform of L along Re(s) = c with q < c < b_0/a_i:
 *   (1/2 pi) int Gamma(s) eta(-s a_i) X^{q-s} / (s - q) dt,  s = c + it.
 */
inline RamanujanResult ramanujan_check(BetaParams const& p,
                                       std::size_t i,
                                       double q,
                                       QuadratureSpec const& quad = {})
{
    LaplaceSeries const series(p, i, quad);
    double const ai = p.gamma().scale(i);
    double const qmax = p.b0() / ai;
    if (!(q > 0 && q < qmax))
    {
        std::ostringstream os;
        os << "Ramanujan check needs 0 < q < b_0 / a_i = " << qmax;
        detail::fail(Errc::Precondition, os.str());
    }

    RamanujanResult r;
    r.split = 4;
    r.contour = 0.5 * (q + qmax);
    double const X = r.split, c = r.contour;

    // x = u^{1/q} removes the endpoint singularity of x^{q-1}
    double const uX = std::pow(X, q);
    auto const head = integrate_interval(
        [&](double u) { return series(std::pow(u, 1 / q)).value / q; },
        0.0,
        uX,
        quad);

    // |Gamma(c + it)| ~ e^{-pi t / 2}; t = 30 leaves < 1e-18 relative
    double const logX = std::log(X);
    auto const tail = integrate_interval(
        [&](double t) {
            cplx const s(c, t);
            cplx const eta = eta_direct(p, -s * ai, quad).value;
            cplx const v = detail::gamma_complex(s) * eta
                           * std::exp((q - s) * logX) / (s - q);
            return v.real();
        },
        0.0,
        30.0,
        quad);

    r.lhs = head.value + tail.value / std::numbers::pi;
    r.rhs = std::tgamma(q) * eta_direct(p, -q * ai, quad).value.real();
    r.rel_diff = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
    return r;
}

//---------------------------------------------------------------------------//
/*!
 * E[beta^n] for a = (1, ..., 1) from values of S_N L_{M-i}(0 | b) and the
 * rational S_N L_0 factors.
 *
 * The M-fold nested product over n-1 >= i_1 > ... > i_M >= 0 is collapsed
 * by counting the chains that end at each i_M = j: there are
 * C(n-1-j, M-1) of them.
 */
inline double unit_a_moments(BetaParams const& p,
                             std::size_t n,
                             QuadratureSpec const& quad = {})
{
    std::size_t const M = p.M();
    detail::require(M >= 1, Errc::Precondition, "unit_a_moments needs M >= 1");
    for (double a : p.gamma().scales())
        detail::require(a == 1.0, Errc::Precondition, "unit_a_moments needs a = (1, ..., 1)");
    detail::require(n >= 1, Errc::Precondition, "moment order must be positive");

    auto binom = [](std::size_t top, std::size_t k) {
        if (k > top)
            return 0.0;
        return boost::math::binomial_coefficient<double>(
            static_cast<unsigned>(top), static_cast<unsigned>(k));
    };

    double log_value = 0;
    for (std::size_t i = 1; i < M; ++i)
    {
        double const c = binom(n, i);
        if (c == 0)
            continue;
        GammaParams const ones(std::vector<double>(M - i, 1.0));
        double const s = sn_log_gamma(ones, p.shifts(), cplx(0.0), quad).value.real();
        log_value += (i % 2 == 0 ? c : -c) * s;
    }
    double nested = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        double const c = binom(n - 1 - j, M - 1);
        if (c == 0)
            continue;
        double s = 0;
        for (auto const& term : p.shifts())
            s -= term.sign * std::log(static_cast<double>(j) + term.shift);
        nested += c * s;
    }
    log_value += (M % 2 == 0 ? nested : -nested);
    return std::exp(log_value);
}

}  // namespace barnes
