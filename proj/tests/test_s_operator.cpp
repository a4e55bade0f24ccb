#include <cmath>

#include "barnes/multiple_gamma.hpp"
#include "barnes/s_operator.hpp"
#include "test_helpers.hpp"

using namespace barnes;
using barnes::test::uniform;

TEST(SubsetShifts, EnumeratesAllSubsets)
{
    std::vector<double> b = {0.5, 1.0, 2.0, 4.0};
    auto s = subset_shifts(b);
    ASSERT_EQ(s.size(), 8u);
    // masks are in increasing order, so the shift is b_0 + mask
    for (unsigned m = 0; m < 8; ++m)
    {
        EXPECT_EQ(s[m].mask, m);
        EXPECT_DOUBLE_EQ(s[m].shift, 0.5 + m);
        EXPECT_EQ(s[m].sign, std::popcount(m) % 2 ? -1 : 1);
    }
    EXPECT_EQ(s[5].indices(), (std::vector<std::size_t>{1, 3}));
}

TEST(SOperator, AnnihilatesLowDegreePolynomials)
{
    for (std::size_t N = 1; N <= 5; ++N)
    {
        std::vector<double> b(N + 1);
        for (auto& x : b)
            x = uniform(0.1, 2.0);
        for (int deg = 0; deg <= static_cast<int>(N); ++deg)
        {
            auto h = [deg](double x) { return std::pow(x, deg); };
            double const v = s_operator(h, 0.3, std::span<double const>(b));
            if (deg < static_cast<int>(N))
            {
                EXPECT_NEAR(v, 0.0, 1e-10) << N << ' ' << deg;
            }
            else
            {
                // S_N x^N = (-1)^N N! b_1 ... b_N
                double expect = 1;
                for (std::size_t j = 1; j <= N; ++j)
                    expect *= -static_cast<double>(j) * b[j];
                EXPECT_NEAR(v, expect, 1e-10 * std::abs(expect));
            }
        }
    }
}

TEST(SOperator, RecursionInLastShift)
{
    // S_N h(q) = S_{N-1} h(q) - S_{N-1} h(q + b_N)
    std::vector<double> b = {0.7, 0.4, 1.3, 0.9};
    std::vector<double> lower(b.begin(), b.end() - 1);
    auto h = [](double x) { return std::log(x) * std::sin(x); };
    double const q = 0.6;
    double const full = s_operator(h, q, std::span<double const>(b));
    double const rec = s_operator(h, q, std::span<double const>(lower))
                       - s_operator(h, q + b.back(), std::span<double const>(lower));
    EXPECT_NEAR(full, rec, 1e-14);
}

TEST(SOperator, ErrorCarriesSubset)
{
    std::vector<double> b = {1.0, 2.0, 3.0};
    GammaParams g({1.0});
    try
    {
        s_operator([&](cplx w) { return log_gamma_m(g, w); }, cplx(-4.0),
                   std::span<double const>(b));
        ADD_FAILURE();
    }
    catch (Error const& e)
    {
        ASSERT_TRUE(e.subset());
        // first failing term is q + b_0 = -3, the empty subset
        EXPECT_TRUE(e.subset()->empty());
    }
}
