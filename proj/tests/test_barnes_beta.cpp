#include <gsl/gsl_sf_gamma.h>

#include <cmath>

#include "barnes/barnes.hpp"
#include "test_helpers.hpp"

using namespace barnes;
using barnes::test::rel_err;
using barnes::test::uniform;

namespace
{
cplx lngamma(cplx z)
{
    gsl_sf_result lnr, arg;
    gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    return {lnr.val, arg.val};
}

// E[x^q] of a x^{b0-1} (1-x^a)^{b1/a-1} / B(b0/a, b1/a)
cplx beta11_mellin(double a, double b0, double b1, cplx q)
{
    return std::exp(lngamma((q + b0) / a) + lngamma((b0 + b1) / a)
                    - lngamma(b0 / a) - lngamma((q + b0 + b1) / a));
}

BetaParams make(std::vector<double> a, std::vector<double> b)
{
    return BetaParams::probabilistic(GammaParams(std::move(a)), std::move(b));
}

std::vector<BetaParams> sample_params()
{
    return {make({}, {0.8, 1.5}),
            make({1.0}, {0.6, 1.4}),
            make({0.7}, {1.2, 0.5, 2.0}),
            make({1.0, 1.6}, {0.9, 0.7, 1.3}),
            make({1.0, 2.5}, {1.1, 0.8, 1.5}),
            make({0.8, 1.3}, {1.4, 0.6, 1.0, 0.9})};
}
}  // namespace

TEST(BetaParams, Validation)
{
    EXPECT_BARNES_ERROR(make({1.0}, {1.0, -0.2}), Errc::ModeError);
    EXPECT_BARNES_ERROR(make({1.0, 1.0}, {1.0, 1.0}), Errc::ModeError);
    EXPECT_BARNES_ERROR(make({1.0}, {}), Errc::Precondition);
    EXPECT_BARNES_ERROR(
        BetaParams::analytic(GammaParams({1.0}), {1.0, -1.5}), Errc::Precondition);
    auto p = BetaParams::analytic(GammaParams({1.0}), {2.0, -0.5, 1.0});
    EXPECT_EQ(p.mode(), Mode::analytic);
    EXPECT_DOUBLE_EQ(p.min_shift(), 1.5);
    EXPECT_BARNES_ERROR(sample(p, 10), Errc::ModeError);
    EXPECT_BARNES_ERROR(atom_probability(p), Errc::ModeError);
}

TEST(ClosedForm, ZeroZero)
{
    auto p = make({}, {1.7});
    for (cplx q : {cplx(0.5), cplx(3.0), cplx(-1.2), cplx(0.4, 2.0)})
        EXPECT_LT(rel_err(mellin_eta(p, q).value, 1.7 / (1.7 + q)), 1e-13);
}

TEST(ClosedForm, ZeroOne)
{
    double const b0 = 0.9, b1 = 2.2;
    auto p = make({}, {b0, b1});
    for (cplx q : {cplx(0.5), cplx(4.0), cplx(-0.6), cplx(1.0, -3.0)})
    {
        cplx const ref = b1 / (b0 + b1) * b0 / (b0 + q) + b0 / (b0 + b1);
        EXPECT_LT(rel_err(mellin_eta(p, q).value, ref), 1e-13);
    }
}

TEST(ClosedForm, ZeroTwo)
{
    double const b0 = 1.3, b1 = 0.4, b2 = 2.1;
    auto p = make({}, {b0, b1, b2});
    double const s = b0 + b1 + b2;
    double const c = b0 * b1 * b2 * s / ((b0 + b1) * (b0 + b2) * (b1 + b2));
    double const atom = b0 * s / ((b0 + b1) * (b0 + b2));
    for (cplx q : {cplx(0.5), cplx(2.0), cplx(-0.9), cplx(0.3, 1.1)})
    {
        cplx const ref = c * (1.0 / (q + b0) - 1.0 / (q + b0 + b1 + b2)) + atom;
        EXPECT_LT(rel_err(mellin_eta(p, q).value, ref), 1e-13);
    }
    EXPECT_NEAR(atom_probability(p), atom, 1e-12);
}

TEST(ClosedForm, OneOne)
{
    for (double a : {0.5, 1.0, 2.3})
    {
        auto p = make({a}, {1.2, 0.7});
        for (cplx q : {cplx(1.0), cplx(3.5), cplx(-0.8), cplx(0.7, 2.5)})
            EXPECT_LT(rel_err(mellin_eta(p, q).value, beta11_mellin(a, 1.2, 0.7, q)),
                      1e-11)
                << a << ' ' << q;
    }
    // uniform law
    EXPECT_NEAR(mellin_eta(make({1.0}, {1.0, 1.0}), 1.0).value.real(), 0.5, 1e-14);
}

TEST(Eta, ZeroIsExactlyOne)
{
    for (auto const& p : sample_params())
        for (auto m : {EtaMethod::direct_sn, EtaMethod::levy_integral,
                       EtaMethod::shintani})
        {
            if (m == EtaMethod::shintani && p.M() == 0)
                continue;
            EXPECT_EQ(mellin_eta(p, 0.0, {}, m).value, cplx(1.0));
        }
}

TEST(Eta, MethodsAgree)
{
    for (auto const& p : sample_params())
    {
        for (int rep = 0; rep < 3; ++rep)
        {
            cplx const q(uniform(-0.5, 3.0) * p.b0(), uniform(-2.0, 2.0));
            cplx const d = mellin_eta(p, q).value;
            cplx const l = mellin_eta(p, q, {}, EtaMethod::levy_integral).value;
            EXPECT_LT(rel_err(l, d), 1e-9) << "M=" << p.M() << " N=" << p.N() << q;
            if (p.M() > 0)
            {
                cplx const s = mellin_eta(p, q, {}, EtaMethod::shintani).value;
                EXPECT_LT(rel_err(s, d), 1e-8) << q;
            }
        }
    }
}

TEST(Eta, MellinTransformProperties)
{
    for (auto const& p : sample_params())
    {
        cplx const q(0.7, 1.9);
        cplx const v = mellin_eta(p, q).value;
        EXPECT_LT(std::abs(mellin_eta(p, std::conj(q)).value - std::conj(v)), 1e-13);
        // |E[beta^q]| <= E[beta^{Re q}] <= 1 on (0, 1]
        EXPECT_LE(std::abs(v), mellin_eta(p, q.real()).value.real() + 1e-13);
        double prev = 1;
        for (double x : {0.5, 1.0, 2.0, 4.0})
        {
            double const e = mellin_eta(p, x).value.real();
            EXPECT_LT(e, prev);
            EXPECT_GT(e, 0);
            prev = e;
        }
    }
}

TEST(Eta, CutAndDomainErrors)
{
    auto p = make({1.0}, {0.8, 0.5});
    EXPECT_BARNES_ERROR(mellin_eta(p, -0.9), Errc::OnCut);
    EXPECT_BARNES_ERROR(mellin_eta(p, -0.9, {}, EtaMethod::levy_integral),
                        Errc::OnCut);
    EXPECT_BARNES_ERROR(levy_exponent(p, cplx(-0.9, 1.0)), Errc::MethodDomain);
    // off the cut the direct method continues past Re q = -b_0
    EXPECT_TRUE(std::isfinite(mellin_eta(p, cplx(-0.9, 1.0)).value.real()));
}

TEST(Levy, DensityMatchesProductForm)
{
    auto p01 = make({}, {0.8, 1.5});
    auto p11 = make({1.7}, {0.8, 1.5});
    for (double t : {0.01, 0.3, 2.0, 9.0})
    {
        double const k01 = std::exp(-0.8 * t) * -std::expm1(-1.5 * t);
        EXPECT_NEAR(levy_density(p01, t), k01, 1e-15);
        EXPECT_NEAR(levy_density(p11, t), k01 / -std::expm1(-1.7 * t), 1e-14);
    }
    EXPECT_DOUBLE_EQ(levy_density(p11, 0), 1.5 / 1.7);
    EXPECT_FALSE(levy_spec(p11).total_mass);
    EXPECT_EQ(levy_spec(p01).small_t_exponent, 1);
    EXPECT_BARNES_ERROR(levy_mass(p11), Errc::NotCompoundPoisson);
}

TEST(Atom, OneTwoMatchesEulerGammaLimit)
{
    // eta_{1,2}(q) -> Gamma((b0+b1)/a) Gamma((b0+b2)/a) / (Gamma(b0/a) Gamma(s/a))
    double const a = 1.4, b0 = 0.9, b1 = 0.6, b2 = 1.7;
    auto p = make({a}, {b0, b1, b2});
    double const ref = std::exp(std::lgamma((b0 + b1) / a) + std::lgamma((b0 + b2) / a)
                                - std::lgamma(b0 / a)
                                - std::lgamma((b0 + b1 + b2) / a));
    EXPECT_NEAR(atom_probability(p), ref, 1e-12);
    EXPECT_NEAR(levy_spec(p).total_mass.value(), -std::log(ref), 1e-11);
    EXPECT_NEAR(asymptotic_profile(p).constant.value(), ref, 1e-12);
    EXPECT_NEAR(std::abs(mellin_eta(p, 1e4).value), ref, 1e-3 * ref);
}

TEST(Asymptotics, PowerLawSlopeForEqualOrders)
{
    auto p = make({1.0, 2.0}, {0.7, 1.3, 0.5});
    auto prof = asymptotic_profile(p);
    ASSERT_TRUE(prof.log_slope);
    EXPECT_DOUBLE_EQ(*prof.log_slope, -1.3 * 0.5 / 2.0);
    EXPECT_FALSE(prof.constant);
    double const slope = (std::log(mellin_eta(p, 1e4).value.real())
                          - std::log(mellin_eta(p, 1e3).value.real()))
                         / std::log(10.0);
    EXPECT_NEAR(slope, *prof.log_slope, 0.01 * std::abs(*prof.log_slope));
}

TEST(Positivity, CompoundPoissonCases)
{
    for (int rep = 0; rep < 10; ++rep)
    {
        std::size_t const M = rep % 3, N = M + 1 + rep % 2;
        std::vector<double> a(M), b(N + 1);
        for (auto& x : a)
            x = uniform(0.3, 3.0);
        for (auto& x : b)
            x = uniform(0.1, 3.0);
        auto p = make(a, b);
        EXPECT_GT(positivity_check(p), 0);
    }
    EXPECT_BARNES_ERROR(positivity_check(make({1.0}, {1.0, 1.0})), Errc::Precondition);
}

TEST(Identities, FunctionalEquation)
{
    for (auto const& p : sample_params())
    {
        if (p.M() == 0)
            continue;
        for (std::size_t i = 0; i < p.M(); ++i)
        {
            cplx const q(uniform(0.0, 2.0), uniform(-1.5, 1.5));
            cplx const lhs = mellin_eta(p, q + p.gamma().scale(i)).value;
            EXPECT_LT(rel_err(functional_equation_rhs(p, q, i).value, lhs), 1e-10);
        }
    }
}

TEST(Identities, FiveSymmetries)
{
    for (auto const& p : sample_params())
    {
        if (p.M() == 0 || p.N() == 0)
            continue;
        cplx const q(uniform(0.0, 2.0), uniform(-1.0, 1.0));
        auto r = symmetry_residuals(p, q, uniform(0.0, 1.5), p.M() - 1, p.N());
        for (double x : r)
            EXPECT_LT(x, 1e-10);
    }
}

TEST(Identities, HoldInAnalyticMode)
{
    auto p = BetaParams::analytic(GammaParams({1.0, 1.5}), {2.0, -0.4, 0.9});
    cplx const q(0.6, 0.8);
    EXPECT_LT(rel_err(functional_equation_rhs(p, q, 1).value,
                      mellin_eta(p, q + 1.5).value),
              1e-10);
    for (double x : symmetry_residuals(p, q, 0.3, 0, 2))
        EXPECT_LT(x, 1e-10);
}

TEST(Bernoulli, SnAnnihilatesAndTopDegree)
{
    for (std::size_t M = 0; M <= 3; ++M)
        for (std::size_t N = 1; N <= 4; ++N)
        {
            std::vector<double> a(M), b(N + 1);
            for (auto& x : a)
                x = uniform(0.3, 2.5);
            for (auto& x : b)
                x = uniform(0.1, 2.5);
            auto p = BetaParams::analytic(GammaParams(a), b);
            cplx const q(uniform(-1.0, 3.0), uniform(-1.0, 1.0));
            for (int n = 0; n < static_cast<int>(N); ++n)
            {
                auto v = sn_bernoulli(p, n, q);
                EXPECT_LT(std::abs(v.value), 1e-12 * std::max(1.0, v.scale));
            }
            double fact = 1;
            for (std::size_t k = 2; k <= N; ++k)
                fact *= static_cast<double>(k);
            double const top = p.gamma().f0() * fact * p.b_product();
            EXPECT_LT(rel_err(sn_bernoulli(p, static_cast<int>(N), q).value, top),
                      1e-11);
        }
}
