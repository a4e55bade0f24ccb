#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>

#include "error.hpp"

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Tolerances and layout for every improper integral in the library.
 *
 * split_point <= 0 selects the default junction between the Taylor-series
 * and direct evaluations of the Malmsten integrand (see
 * default_split_point in multiple_gamma.hpp).
 */
struct QuadratureSpec
{
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    double split_point = 0;
    int series_order = 30;
    int max_refinements = 15;

    bool operator==(QuadratureSpec const&) const = default;
};

template<class T>
struct QuadResult
{
    T value{};
    double error = 0;  //!< estimated absolute error
    double l1 = 0;  //!< integral of |f|, the cancellation scale
};

namespace detail
{
inline void check_spec(QuadratureSpec const& q)
{
    require(q.abs_tol > 0 && q.rel_tol > 0,
            Errc::Precondition,
            "quadrature tolerances must be positive");
    require(q.max_refinements >= 4,
            Errc::Precondition,
            "max_refinements must be at least 4");
}

// Boost's integrators precompute abscissa tables; keep one per thread and
// refinement level.
inline boost::math::quadrature::tanh_sinh<double>&
tanh_sinh_for(int levels)
{
    thread_local std::map<int, boost::math::quadrature::tanh_sinh<double>>
        cache;
    auto it = cache.find(levels);
    if (it == cache.end())
        it = cache.emplace(levels, boost::math::quadrature::tanh_sinh<double>(
                                       static_cast<std::size_t>(levels)))
                 .first;
    return it->second;
}

inline boost::math::quadrature::exp_sinh<double>&
exp_sinh_for(int levels)
{
    thread_local std::map<int, boost::math::quadrature::exp_sinh<double>>
        cache;
    auto it = cache.find(levels);
    if (it == cache.end())
        it = cache.emplace(levels, boost::math::quadrature::exp_sinh<double>(
                                       static_cast<std::size_t>(levels)))
                 .first;
    return it->second;
}

template<class T>
QuadResult<T> finish(T value,
                     double err,
                     double l1,
                     QuadratureSpec const& spec,
                     char const* what)
{
    using std::abs;
    if (!std::isfinite(abs(value)))
        fail(Errc::QuadratureFailure,
             std::string(what) + ": non-finite integral");
    // The integrators report the difference between the last two levels,
    // which overstates the error of a double-exponential rule; accept it
    // against the looser of the two tolerances.
    double const target = std::max(spec.abs_tol, spec.rel_tol * l1);
    if (!(err <= target))
    {
        std::ostringstream os;
        os << what << ": error estimate " << err << " exceeds " << target;
        fail(Errc::QuadratureFailure, os.str());
    }
    double const floor = 16 * std::numeric_limits<double>::epsilon() * l1;
    return {value, std::max(err, floor), l1};
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Integrate a real- or complex-valued f over the finite interval [a, b]
 * with tanh-sinh quadrature.
 */
template<class F>
auto integrate_interval(F&& f, double a, double b, QuadratureSpec const& spec)
    -> QuadResult<std::invoke_result_t<F, double>>
{
    detail::check_spec(spec);
    double err = 0, l1 = 0;
    auto& rule = detail::tanh_sinh_for(spec.max_refinements);
    auto value = rule.integrate(f, a, b, spec.rel_tol * 0.1, &err, &l1);
    return detail::finish(value, err, l1, spec, "tanh-sinh");
}

//---------------------------------------------------------------------------//
/*!
 * Integrate f over [a, infinity) with exp-sinh quadrature.
 */
template<class F>
auto integrate_to_infinity(F&& f, double a, QuadratureSpec const& spec)
    -> QuadResult<std::invoke_result_t<F, double>>
{
    detail::check_spec(spec);
    double err = 0, l1 = 0;
    auto& rule = detail::exp_sinh_for(std::min(spec.max_refinements, 12));
    auto value = rule.integrate(f,
                                a,
                                std::numeric_limits<double>::infinity(),
                                spec.rel_tol * 0.1,
                                &err,
                                &l1);
    return detail::finish(value, err, l1, spec, "exp-sinh");
}

//---------------------------------------------------------------------------//
/*!
 * Integrate over [0, infinity), splitting at `split` so that the smooth
 * near-zero piece uses tanh-sinh and the decaying tail uses exp-sinh.
 */
template<class F>
auto integrate_half_line(F&& f,
                         QuadratureSpec const& spec,
                         double split = 1.0)
    -> QuadResult<std::invoke_result_t<F, double>>
{
    auto head = integrate_interval(f, 0.0, split, spec);
    auto tail = integrate_to_infinity(f, split, spec);
    return {head.value + tail.value,
            head.error + tail.error,
            head.l1 + tail.l1};
}

}  // namespace barnes
