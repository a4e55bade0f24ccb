#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/random/beta_distribution.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "beta_params.hpp"
#include "detail/euler_gamma.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "multiple_gamma.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Parameters of the Selberg integral
 *   int_{[0,1]^l} prod s_i^{lambda_1} (1 - s_i)^{lambda_2}
 *                 prod_{i<j} |s_i - s_j|^{-mu} ds.
 * l = 0 marks parameters used only for the Mellin transform of M.
 */
struct SelbergParams
{
    double mu = 0.5;
    double lambda1 = 0;
    double lambda2 = 0;
    unsigned l = 0;

    double tau() const { return 2 / mu; }

    void validate(bool need_l) const
    {
        std::ostringstream os;
        if (!(mu > 0 && mu < 2))
            os << "mu = " << mu << " must lie in (0, 2)";
        else if (!(lambda1 > -mu / 2 && lambda2 > -mu / 2))
            os << "lambda_1, lambda_2 must exceed -mu/2 = " << -mu / 2;
        else if (need_l && !(l >= 1 && static_cast<double>(l) < tau()))
            os << "l = " << l << " must satisfy 1 <= l < 2/mu = " << tau();
        else
            return;
        detail::fail(Errc::ParamDomain, os.str());
    }
};

//! Selberg's closed-form value S_{mu,l}
inline double selberg_product(SelbergParams const& p)
{
    p.validate(true);
    double const mu = p.mu, l = p.l;
    double s = 0;
    for (unsigned k = 0; k < p.l; ++k)
    {
        double const dk = k;
        s += std::lgamma(1 - (dk + 1) * mu / 2) - std::lgamma(1 - mu / 2)
             + std::lgamma(1 + p.lambda1 - dk * mu / 2)
             + std::lgamma(1 + p.lambda2 - dk * mu / 2)
             - std::lgamma(2 + p.lambda1 + p.lambda2 - (l + dk - 1) * mu / 2);
    }
    return std::exp(s);
}

struct McEstimate
{
    double estimate = 0;
    double std_error = 0;
    std::size_t n = 0;
    bool variance_warning = false;  //!< relative std error above 10%
};

/*!
 * Estimate the Selberg integral by importance sampling from independent
 * Beta(1 + lambda_1, 1 + lambda_2) coordinates, weighting each point by
 * B(1 + lambda_1, 1 + lambda_2)^l prod_{i<j} |s_i - s_j|^{-mu}.
 *
 * For l = 1 there is no interaction and the integral is computed by
 * quadrature instead.
 */
inline McEstimate selberg_average_mc(SelbergParams const& p,
                                     std::size_t n,
                                     std::uint64_t seed,
                                     QuadratureSpec const& quad = {})
{
    p.validate(true);
    double const alpha = 1 + p.lambda1, beta = 1 + p.lambda2;
    McEstimate r;
    if (p.l == 1)
    {
        auto const v = integrate_interval(
            [&](double s) {
                return std::pow(s, p.lambda1) * std::pow(1 - s, p.lambda2);
            },
            0.0,
            1.0,
            quad);
        r.estimate = v.value;
        r.std_error = v.error;
        return r;
    }
    detail::require(p.l <= 4, Errc::ParamDomain, "Monte Carlo supports l <= 4");
    detail::require(n >= 10'000, Errc::ParamDomain, "Monte Carlo needs n >= 10^4");

    bool const uniform = alpha == 1 && beta == 1;
    double const log_norm = static_cast<double>(p.l)
                            * std::log(boost::math::beta(alpha, beta));
    Philox rng(seed, 0);
    boost::random::beta_distribution<double> proposal(alpha, beta);
    double sum = 0, sum2 = 0;
    double s[4];
    for (std::size_t k = 0; k < n; ++k)
    {
        for (unsigned i = 0; i < p.l; ++i)
        {
            s[i] = uniform ? rng.uniform() : proposal(rng);
        }
        double logw = log_norm;
        for (unsigned i = 0; i < p.l; ++i)
            for (unsigned j = i + 1; j < p.l; ++j)
                logw -= p.mu * std::log(std::abs(s[i] - s[j]));
        double const w = std::exp(logw);
        sum += w;
        sum2 += w * w;
    }
    double const dn = static_cast<double>(n);
    r.n = n;
    r.estimate = sum / dn;
    double const var = std::max(0.0, (sum2 - dn * r.estimate * r.estimate) / (dn - 1));
    r.std_error = std::sqrt(var / dn);
    r.variance_warning = r.std_error > 0.1 * std::abs(r.estimate);
    return r;
}

//---------------------------------------------------------------------------//
/*!
 * Mellin transform E[M^q] of the (mu, lambda_1, lambda_2) distribution in
 * terms of Gamma_2(. | 1, tau). The q-independent denominators are
 * computed once per instance.
 */
class MellinM
{
  public:
    explicit MellinM(SelbergParams const& p, QuadratureSpec const& quad = {})
        : p_(p), quad_(quad), gamma_({1.0, p.tau()})
    {
        p.validate(false);
        double const tau = p.tau();
        c1_ = 1 + tau * (1 + p.lambda1);
        c2_ = 1 + tau * (1 + p.lambda2);
        c3_ = 2 + tau * (2 + p.lambda1 + p.lambda2);
        denom_ = L2(c1_) + L2(c2_) + L2(tau);
        log_gamma_ratio_ = std::lgamma(1 - 1 / tau);
    }

    cplx log_value(cplx q) const
    {
        double const tau = p_.tau();
        if (!(q.real() < tau))
        {
            std::ostringstream os;
            os << "Mellin transform of M requires Re(q) < tau = " << tau;
            detail::fail(Errc::MellinDomain, os.str());
        }
        if (q == cplx(0.0))
            return 0.0;
        return q / tau * std::log(tau) + q * std::log(2 * std::numbers::pi)
               - q * log_gamma_ratio_ + L2(c1_ - q) + L2(c2_ - q)
               + L2(tau - q) + L2(c3_ - q) - L2(c3_ - 2.0 * q) - denom_;
    }

    cplx operator()(cplx q) const { return std::exp(log_value(q)); }

  private:
    cplx L2(cplx w) const { return log_gamma_m(gamma_, w, quad_); }

    SelbergParams p_;
    QuadratureSpec quad_;
    GammaParams gamma_;
    double c1_ = 0, c2_ = 0, c3_ = 0;
    cplx denom_;
    double log_gamma_ratio_ = 0;
};

inline cplx
mellin_M(SelbergParams const& p, cplx q, QuadratureSpec const& quad = {})
{
    return MellinM(p, quad)(q);
}

//---------------------------------------------------------------------------//
/*!
 * Independent factors const * L * X_1 * X_2 * X_3 * Y of M, where log L is
 * centered normal, X_k = 1 / beta_{2,2}(1, tau; b^{(k)}) and Y has density
 * tau y^{-1-tau} exp(-y^{-tau}).
 */
struct MFactorSet
{
    double constant = 0;
    double lognormal_variance = 0;
    BetaParams X1, X2, X3;
    double frechet_shape = 0;
};

inline MFactorSet factor_set(SelbergParams const& p)
{
    p.validate(false);
    double const tau = p.tau(), l1 = p.lambda1, l2 = p.lambda2;
    GammaParams const g({1.0, tau});
    auto make = [&](double b0, double b1, double b2) {
        bool const positive = b1 > 0 && b2 > 0;
        return BetaParams(g, {b0, b1, b2},
                          positive ? Mode::probabilistic : Mode::analytic);
    };
    double const d = tau * (l2 - l1) / 2;
    double const e = (1 + tau + tau * l1 + tau * l2) / 2;
    return {2 * std::numbers::pi
                * std::pow(2.0, -(3 * (1 + tau) + 2 * tau * (l1 + l2)) / tau)
                / std::tgamma(1 - 1 / tau),
            4 * std::numbers::ln2 / tau,
            make(1 + tau + tau * l1, d, d),
            make(1 + tau + tau * (l1 + l2) / 2, 0.5, tau / 2),
            make(1 + tau, e, e),
            tau};
}

//! E[const^q L^q X_1^q X_2^q X_3^q Y^q]
inline cplx factor_mellin_product(SelbergParams const& p,
                                  cplx q,
                                  QuadratureSpec const& quad = {})
{
    auto const f = factor_set(p);
    double const tau = p.tau();
    if (!(q.real() < tau))
    {
        std::ostringstream os;
        os << "Mellin transform of Y requires Re(q) < tau = " << tau;
        detail::fail(Errc::MellinDomain, os.str());
    }
    if (q == cplx(0.0))
        return 1.0;
    cplx log_value = q * std::log(f.constant)
                     + 0.5 * q * q * f.lognormal_variance
                     + detail::log_gamma_complex(1.0 - q / tau);
    for (auto const* x : {&f.X1, &f.X2, &f.X3})
        log_value += std::log(eta_direct(*x, -q, quad).value);
    return std::exp(log_value);
}

//---------------------------------------------------------------------------//
struct MellinCheck
{
    cplx q;
    cplx lhs;
    cplx rhs;
    double rel_err = 0;
};

struct ChainReport
{
    SelbergParams params;
    //! beta_{1,1}(a_1 = 1; b_0 = 1 + lambda_1, b_1 = 1 + lambda_2)
    BetaParams integrand_law;
    bool integrand_uniform = false;
    MFactorSet factors;
    std::optional<double> product_value;
    std::optional<McEstimate> mc;
    std::vector<MellinCheck> moment_checks;  //!< mellin_M(l) vs S_{mu,l}
    bool moments_pass = true;
};

/*!
 * Computed summary of the chain pdf of beta_{1,1} -> Selberg integral ->
 * const L X_1 X_2 X_3 Y, with the moment identity checked for every
 * integer l < tau.
 */
inline ChainReport interpret_chain_report(SelbergParams const& p,
                                          double tol = 1e-6,
                                          std::size_t mc_samples = 0,
                                          std::uint64_t seed = 0,
                                          QuadratureSpec const& quad = {})
{
    p.validate(false);
    ChainReport r{p,
                  BetaParams::probabilistic(GammaParams({1.0}),
                                            {1 + p.lambda1, 1 + p.lambda2}),
                  p.lambda1 == 0 && p.lambda2 == 0,
                  factor_set(p),
                  std::nullopt,
                  std::nullopt,
                  {},
                  true};
    if (p.l >= 1)
    {
        p.validate(true);
        r.product_value = selberg_product(p);
        if (mc_samples > 0)
            r.mc = selberg_average_mc(p, mc_samples, seed, quad);
    }
    MellinM const mellin(p, quad);
    for (unsigned l = 1; static_cast<double>(l) < p.tau(); ++l)
    {
        SelbergParams pl = p;
        pl.l = l;
        cplx const lhs = mellin(static_cast<double>(l));
        double const rhs = selberg_product(pl);
        double const err = std::abs(lhs - rhs) / std::abs(rhs);
        r.moment_checks.push_back({static_cast<double>(l), lhs, rhs, err});
        r.moments_pass = r.moments_pass && err < tol;
    }
    return r;
}

}  // namespace barnes
