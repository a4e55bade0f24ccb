#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace barnes
{
//! Largest N for which the 2^N subset sums are enumerated
inline constexpr std::size_t max_subset_order = 20;

//---------------------------------------------------------------------------//
/*!
 * One term of the alternating subset sum: b_0 + b_{k_1} + ... + b_{k_p}
 * with sign (-1)^p. Indices are 1-based into b.
 */
struct SubsetShift
{
    double shift;
    int sign;
    unsigned mask;  //!< bit j-1 set when b_j is in the subset

    std::vector<std::size_t> indices() const
    {
        std::vector<std::size_t> result;
        for (std::size_t j = 0; j < 32; ++j)
            if (mask & (1u << j))
                result.push_back(j + 1);
        return result;
    }
};

/*!
 * All 2^N subset shifts of b = (b_0..b_N) in increasing bitmask order.
 */
inline std::vector<SubsetShift> subset_shifts(std::span<double const> b)
{
    detail::require(!b.empty(), Errc::Precondition, "b must contain b_0");
    std::size_t const N = b.size() - 1;
    detail::require(N <= max_subset_order,
                    Errc::Precondition,
                    "N above the supported subset-enumeration limit");
    std::vector<SubsetShift> result;
    result.reserve(std::size_t{1} << N);
    for (unsigned mask = 0; mask < (1u << N); ++mask)
    {
        double shift = b[0];
        int sign = 1;
        for (std::size_t j = 0; j < N; ++j)
        {
            if (mask & (1u << j))
            {
                shift += b[j + 1];
                sign = -sign;
            }
        }
        result.push_back({shift, sign, mask});
    }
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * (S_N h)(q|b) = sum_p (-1)^p sum_{k_1<..<k_p} h(q + b_0 + b_{k_1} + ...).
 *
 * Terms are accumulated in a fixed order. An Error thrown by h is rethrown
 * with the offending subset attached.
 */
template<class H, class Q>
auto s_operator(H&& h, Q q, std::span<SubsetShift const> shifts)
{
    using R = decltype(h(q + 0.0));
    R sum{};
    for (auto const& term : shifts)
    {
        try
        {
            R const v = h(q + term.shift);
            sum += term.sign > 0 ? v : -v;
        }
        catch (Error const& e)
        {
            if (e.subset())
                throw;
            throw e.with_subset(term.indices());
        }
    }
    return sum;
}

template<class H, class Q>
auto s_operator(H&& h, Q q, std::span<double const> b)
{
    auto const shifts = subset_shifts(b);
    return s_operator(std::forward<H>(h), q, std::span<SubsetShift const>(shifts));
}

}  // namespace barnes
