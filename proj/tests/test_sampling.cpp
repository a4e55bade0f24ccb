#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "barnes/barnes.hpp"
#include "test_helpers.hpp"

using namespace barnes;

namespace
{
BetaParams make(std::vector<double> a, std::vector<double> b)
{
    return BetaParams::probabilistic(GammaParams(std::move(a)), std::move(b));
}

// Kolmogorov-Smirnov statistic sqrt(n) D_n of sorted data against cdf
template<class F>
double ks_statistic(std::vector<double> v, F&& cdf)
{
    std::sort(v.begin(), v.end());
    double const n = static_cast<double>(v.size());
    double d = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        double const f = cdf(v[k]);
        d = std::max({d, f - static_cast<double>(k) / n,
                      static_cast<double>(k + 1) / n - f});
    }
    return std::sqrt(n) * d;
}

// 1% critical value of the limiting Kolmogorov distribution
constexpr double ks_critical = 1.628;

void expect_mellin(SampleBatch const& batch, BetaParams const& p, cplx q)
{
    auto est = empirical_mellin(batch, q);
    cplx const exact = mellin_eta(p, q).value;
    EXPECT_LT(std::abs(est.estimate - exact), 3 * est.std_error + 1e-12)
        << "q=" << q << " est=" << est.estimate << " exact=" << exact;
}
}  // namespace

TEST(Philox, KnownAnswers)
{
    using B = Philox::Block;
    EXPECT_EQ(Philox::generate(B{0, 0, 0, 0}, {0, 0}),
              (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox::generate(B{~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
              (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                               {0xa4093822, 0x299f31d0}),
              (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAndUniformRange)
{
    Philox a(7, 0), b(7, 0), c(7, 1);
    int same = 0;
    for (int k = 0; k < 100; ++k)
    {
        auto const x = a();
        EXPECT_EQ(x, b());
        same += x == c();
    }
    EXPECT_LT(same, 3);
    double lo = 1, hi = 0, sum = 0;
    for (int k = 0; k < 100000; ++k)
    {
        double const u = a.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GT(lo, 0);
    EXPECT_LT(hi, 1);
    EXPECT_NEAR(sum / 1e5, 0.5, 3 * std::sqrt(1.0 / 12 / 1e5));
}

TEST(Sampler, DeterministicAndPrefixStable)
{
    auto p = make({1.0, 1.5}, {0.8, 1.2, 0.7});
    SamplerConfig cfg;
    cfg.seed = 99;
    cfg.batch_size = 64;
    auto x = sample(p, 300, cfg);
    auto y = sample(p, 300, cfg);
    auto z = sample(p, 100, cfg);
    EXPECT_EQ(x.values, y.values);
    EXPECT_TRUE(std::equal(z.values.begin(), z.values.end(), x.values.begin()));
    cfg.stream = 1;
    EXPECT_NE(sample(p, 300, cfg).values, x.values);
    EXPECT_EQ(x.method, SampleMethod::truncated_levy);
    std::ostringstream a, b;
    write_csv(x, a);
    write_csv(y, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sampler, ConfigErrors)
{
    auto p = make({1.0}, {1.0, 1.0});
    SamplerConfig cfg;
    cfg.nodes = 100;
    EXPECT_BARNES_ERROR(sample(p, 10, cfg), Errc::ConfigError);
    cfg = {};
    cfg.epsilon = 0;
    EXPECT_BARNES_ERROR(sample(p, 10, cfg), Errc::ConfigError);
    cfg.epsilon = 10;
    EXPECT_BARNES_ERROR(sample(p, 10, cfg), Errc::ConfigError);
}

TEST(Sampler, AtomOfZeroOne)
{
    double const b0 = 1.5, b1 = 0.75;
    auto p = make({}, {b0, b1});
    auto s = sample(p, 50000, {3});
    EXPECT_EQ(s.method, SampleMethod::compound_poisson);
    std::vector<double> cont;
    std::size_t atoms = 0;
    for (double v : s.values)
    {
        ASSERT_GT(v, 0);
        ASSERT_LE(v, 1);
        if (v == 1)
            ++atoms;
        else
            cont.push_back(v);
    }
    double const pa = b0 / (b0 + b1);
    double const n = static_cast<double>(s.values.size());
    EXPECT_NEAR(atoms / n, pa, 3 * std::sqrt(pa * (1 - pa) / n));
    // given beta < 1 the law is b0 x^{b0-1} dx
    EXPECT_LT(ks_statistic(cont, [&](double x) { return std::pow(x, b0); }),
              ks_critical);
}

TEST(Sampler, ZeroTwoContinuousPart)
{
    double const b0 = 0.9, b1 = 0.6, b2 = 1.4, s = b1 + b2;
    auto p = make({}, {b0, b1, b2});
    double const c = b0 * b1 * b2 * (b0 + s) / ((b0 + b1) * (b0 + b2) * (b1 + b2));
    double const atom = b0 * (b0 + s) / ((b0 + b1) * (b0 + b2));
    auto batch = sample(p, 50000, {5});
    std::vector<double> cont;
    for (double v : batch.values)
        if (v < 1)
            cont.push_back(v);
    auto cdf = [&](double x) {
        return c * (std::pow(x, b0) / b0 - std::pow(x, b0 + s) / (b0 + s)) / (1 - atom);
    };
    EXPECT_LT(ks_statistic(cont, cdf), ks_critical);
}

TEST(Sampler, BetaLawForOneOne)
{
    // beta_{1,1}(1; 2, 3) is Beta(2, 3)
    auto p = make({1.0}, {2.0, 3.0});
    auto batch = sample(p, 50000, {11});
    EXPECT_LT(ks_statistic(batch.values,
                           [](double x) { return boost::math::ibeta(2.0, 3.0, x); }),
              ks_critical);
    EXPECT_GT(batch.drift, 0);
    expect_mellin(batch, p, 1.0);
    expect_mellin(batch, p, 2.0);
}

TEST(Sampler, ScaledOneOne)
{
    // beta^a with a = 2 is Beta(b0/a, b1/a)
    auto p = make({2.0}, {1.2, 3.0});
    auto batch = sample(p, 50000, {12});
    std::vector<double> sq;
    for (double v : batch.values)
        sq.push_back(v * v);
    EXPECT_LT(ks_statistic(sq, [](double x) { return boost::math::ibeta(0.6, 1.5, x); }),
              ks_critical);
}

TEST(Sampler, MellinOfHigherOrders)
{
    auto p22 = make({1.0, 1.7}, {0.8, 1.1, 0.6});
    auto b22 = sample(p22, 50000, {21});
    for (cplx q : {cplx(0.5), cplx(1.0), cplx(2.0), cplx(-0.3), cplx(1.0, 1.0)})
        expect_mellin(b22, p22, q);

    auto p13 = make({0.8}, {1.1, 0.5, 1.3, 0.9});
    auto b13 = sample(p13, 50000, {22});
    for (cplx q : {cplx(0.5), cplx(2.0)})
        expect_mellin(b13, p13, q);
    std::size_t atoms = std::count(b13.values.begin(), b13.values.end(), 1.0);
    double const pa = atom_probability(p13);
    EXPECT_NEAR(atoms / 5e4, pa, 3 * std::sqrt(pa * (1 - pa) / 5e4));
}

TEST(Sampler, TruncationReport)
{
    auto p = make({1.0, 1.5}, {0.8, 1.2, 0.7});
    double const k0 = levy_density(p, 0.0);
    // k(t) -> k(0) at the origin, so int_0^eps t k = k(0) eps^2 / 2 + ...
    EXPECT_NEAR(truncation_error_report(p, 1e-4), k0 * 0.5e-8, 1e-3 * k0 * 0.5e-8);
    EXPECT_NEAR(truncation_drift(p, 1e-4), k0 * 1e-4, 1e-3 * k0 * 1e-4);
    EXPECT_DOUBLE_EQ(truncation_error_report(p, 0), 0);
    EXPECT_BARNES_ERROR(truncation_error_report(make({1.0}, {1.0, 1.0, 1.0}), 1e-3),
                        Errc::Precondition);
}
