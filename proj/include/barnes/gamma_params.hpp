#pragma once

#include <boost/math/special_functions/bernoulli.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Order M and scales a = (a_1..a_M) of a Barnes multiple gamma function.
 *
 * Defines f(t) = t^M prod_j (1 - exp(-a_j t))^{-1}. The Taylor coefficients
 * of f at t = 0 are computed once on construction and shared between
 * copies, so every Bernoulli polynomial and Malmsten integrand built from
 * the same parameters reuses them.
 */
class GammaParams
{
  public:
    //! Extra Taylor orders stored beyond M + 1
    static constexpr int taylor_budget = 64;

    GammaParams() : GammaParams(std::vector<double>{}) {}

    explicit GammaParams(std::vector<double> a) : a_(std::move(a))
    {
        for (double aj : a_)
        {
            if (!(aj > 0) || !std::isfinite(aj))
            {
                std::ostringstream os;
                os << "scale a_j = " << aj << " must be positive and finite";
                detail::fail(Errc::Precondition, os.str());
            }
        }
        coeffs_ = std::make_shared<std::vector<double> const>(
            compute_taylor(a_, order() + 1 + taylor_budget));
    }

    std::size_t order() const noexcept { return a_.size(); }
    std::span<double const> scales() const noexcept { return a_; }
    double scale(std::size_t j) const { return a_.at(j); }

    double max_scale() const noexcept
    {
        return a_.empty() ? 1.0 : *std::max_element(a_.begin(), a_.end());
    }
    double min_scale() const noexcept
    {
        return a_.empty() ? 1.0 : *std::min_element(a_.begin(), a_.end());
    }

    //! f(0) = 1 / (a_1 ... a_M)
    double f0() const noexcept { return (*coeffs_)[0]; }

    //! Cached Taylor coefficients c_n of f at t = 0
    std::span<double const> taylor() const noexcept { return *coeffs_; }

    //! Parameters with a_i removed (the hat-a_i of the recursions)
    GammaParams without(std::size_t i) const
    {
        detail::require(i < a_.size(), Errc::Precondition, "scale index");
        std::vector<double> rest = a_;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        return GammaParams(std::move(rest));
    }

    std::size_t argmax_scale() const noexcept
    {
        return static_cast<std::size_t>(
            std::max_element(a_.begin(), a_.end()) - a_.begin());
    }

    //! Taylor coefficients of f through `order`, computed without the cache
    static std::vector<double>
    compute_taylor(std::span<double const> a, std::size_t order)
    {
        // u / (1 - e^{-u}) = sum_n B_n^+ u^n / n!, with B_1^+ = +1/2
        std::vector<double> unit(order + 1, 0.0);
        double fact = 1;
        for (std::size_t n = 0; n <= order; ++n)
        {
            if (n > 0)
                fact *= static_cast<double>(n);
            double bn = 0;
            if (n == 0)
                bn = 1;
            else if (n == 1)
                bn = 0.5;
            else if (n % 2 == 0)
                bn = boost::math::bernoulli_b2n<double>(static_cast<int>(n / 2));
            unit[n] = bn / fact;
        }

        std::vector<double> result(order + 1, 0.0);
        result[0] = 1;
        for (double aj : a)
        {
            // t / (1 - e^{-a t}) = (1/a) * sum unit_n (a t)^n
            std::vector<double> factor(order + 1);
            double pw = 1 / aj;
            for (std::size_t n = 0; n <= order; ++n)
            {
                factor[n] = unit[n] * pw;
                pw *= aj;
            }
            std::vector<double> next(order + 1, 0.0);
            for (std::size_t n = 0; n <= order; ++n)
                for (std::size_t m = 0; m <= n; ++m)
                    next[n] += result[m] * factor[n - m];
            result = std::move(next);
        }
        return result;
    }

  private:
    std::vector<double> a_;
    std::shared_ptr<std::vector<double> const> coeffs_;
};

}  // namespace barnes
