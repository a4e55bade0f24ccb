#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "beta_params.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace barnes
{
struct SamplerConfig
{
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double epsilon = 1e-6;  //!< small-jump truncation, M = N only
    std::size_t nodes = 1024;  //!< log-spaced jump-table nodes
    std::size_t batch_size = 4096;  //!< samples per RNG stream
};

enum class SampleMethod
{
    compound_poisson,
    truncated_levy,
};

inline char const* to_string(SampleMethod m)
{
    return m == SampleMethod::compound_poisson ? "compound-poisson"
                                               : "truncated-levy";
}

namespace detail
{
//! Integral of g over [lo, hi] in the variable s = log t
template<class G>
double gauss_log(G&& g, double lo, double hi)
{
    return boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double s) {
            double const t = std::exp(s);
            return g(t) * t;
        },
        std::log(lo),
        std::log(hi));
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Sampler for jumps of the Levy measure k(t) dt / t restricted to
 * (t_min, inf), where t_min = 0 for M < N and epsilon for M = N.
 *
 * The measure is split into three pieces:
 *  - (0, t_lo) for M < N: proposal proportional to t^{N-M-1}, accepted
 *    against a bound on k(t) / t^{N-M};
 *  - [t_lo, t_hi]: inverse CDF tabulated on a log grid and interpolated
 *    by a monotone cubic in (mass fraction, log t);
 *  - (t_hi, inf): proposal t_hi + Exp(b_0) accepted with probability
 *    (t_hi / t) k(t) e^{b_0 t} / bound.
 */
class JumpTable
{
  public:
    JumpTable(BetaParams const& p, double t_min, std::size_t nodes)
        : p_(p)
    {
        std::size_t const M = p.M(), N = p.N();
        detail::require(nodes >= 256, Errc::ConfigError, "jump table needs at least 256 nodes");
        double max_scale = p.b0(), min_scale = p.b0();
        for (double x : p.b())
            max_scale = std::max(max_scale, x), min_scale = std::min(min_scale, x);
        for (double x : p.gamma().scales())
            max_scale = std::max(max_scale, x), min_scale = std::min(min_scale, x);

        // Beyond t_hi the tail sampler is exact; this range keeps its
        // acceptance rate high without underflowing k(t_hi).
        t_hi_ = std::max(40.0 / p.b0(), std::min(28.0 / min_scale, 600.0 / p.b0()));
        if (M < N)
        {
            detail::require(t_min == 0, Errc::ConfigError, "compound Poisson table starts at 0");
            t_lo_ = 1e-3 / max_scale;
            power_ = static_cast<double>(N - M);
        }
        else
        {
            if (!(t_min > 0 && t_min < 1e-2 * t_hi_))
                detail::fail(Errc::ConfigError,
                             "truncation epsilon must be positive and below "
                             "the jump-table range");
            t_lo_ = t_min;
        }

        auto g = [&](double t) { return levy_density(p_, t) / t; };

        // Grid and cumulative masses
        grid_.resize(nodes);
        cum_.assign(nodes, 0.0);
        double const l0 = std::log(t_lo_), l1 = std::log(t_hi_);
        for (std::size_t n = 0; n < nodes; ++n)
            grid_[n] = l0 + (l1 - l0) * static_cast<double>(n)
                                / static_cast<double>(nodes - 1);
        grid_.back() = l1;
        for (std::size_t n = 1; n < nodes; ++n)
            cum_[n] = cum_[n - 1]
                      + detail::gauss_log(g, std::exp(grid_[n - 1]), std::exp(grid_[n]));
        table_mass_ = cum_.back();

        // Slopes d(log t)/dG = 1 / k(t), limited for monotonicity
        slope_.resize(nodes);
        for (std::size_t n = 0; n < nodes; ++n)
            slope_[n] = 1 / std::max(levy_density(p_, std::exp(grid_[n])),
                                     std::numeric_limits<double>::min());
        for (std::size_t n = 0; n + 1 < nodes; ++n)
        {
            if (!(cum_[n + 1] > cum_[n]))
                continue;
            double const delta = (grid_[n + 1] - grid_[n]) / (cum_[n + 1] - cum_[n]);
            double const alpha = slope_[n] / delta, beta = slope_[n + 1] / delta;
            double const r = alpha * alpha + beta * beta;
            if (r > 9)
            {
                double const tau = 3 / std::sqrt(r);
                slope_[n] = tau * alpha * delta;
                slope_[n + 1] = tau * beta * delta;
            }
        }

        // Small-t piece
        if (M < N)
        {
            head_mass_ = boost::math::quadrature::gauss<double, 15>::integrate(g, 0.0, t_lo_);
            double bound = p.b_product() * p.gamma().f0();
            for (double a : p.gamma().scales())
                bound /= -std::expm1(-a * t_lo_) / (a * t_lo_);
            head_bound_ = bound;
        }

        // Tail piece: k(t) e^{b_0 t} <= 1 / prod_i (1 - e^{-a_i t_hi})
        tail_bound_ = 1;
        for (double a : p.gamma().scales())
            tail_bound_ /= -std::expm1(-a * t_hi_);
        tail_mass_ = integrate_to_infinity(g, t_hi_, QuadratureSpec{}).value;

        total_ = head_mass_ + table_mass_ + tail_mass_;
    }

    //! Total Levy mass of (t_min, inf)
    double total_mass() const noexcept { return total_; }
    double t_lo() const noexcept { return t_lo_; }
    double t_hi() const noexcept { return t_hi_; }

    double draw(Philox& rng) const
    {
        double const u = rng.uniform() * total_;
        if (u < head_mass_)
            return draw_head(rng);
        if (u < head_mass_ + table_mass_)
            return draw_table((u - head_mass_));
        return draw_tail(rng);
    }

  private:
    double draw_table(double mass) const
    {
        auto it = std::upper_bound(cum_.begin(), cum_.end(), mass);
        std::size_t n = static_cast<std::size_t>(it - cum_.begin());
        n = std::clamp<std::size_t>(n, 1, cum_.size() - 1) - 1;
        double const h = cum_[n + 1] - cum_[n];
        double const s = std::clamp((mass - cum_[n]) / h, 0.0, 1.0);
        double const s2 = s * s, s3 = s2 * s;
        double const y = (2 * s3 - 3 * s2 + 1) * grid_[n]
                         + (s3 - 2 * s2 + s) * h * slope_[n]
                         + (-2 * s3 + 3 * s2) * grid_[n + 1]
                         + (s3 - s2) * h * slope_[n + 1];
        return std::exp(std::clamp(y, grid_[n], grid_[n + 1]));
    }

    double draw_head(Philox& rng) const
    {
        while (true)
        {
            double const t = t_lo_ * std::pow(rng.uniform(), 1 / power_);
            double const ratio = levy_density(p_, t) / std::pow(t, power_);
            if (rng.uniform() * head_bound_ <= ratio)
                return t;
        }
    }

    double draw_tail(Philox& rng) const
    {
        while (true)
        {
            double const t = t_hi_ + rng.exponential() / p_.b0();
            double const accept
                = (t_hi_ / t) * detail::levy_ratio(p_, t) / tail_bound_;
            if (rng.uniform() <= accept)
                return t;
        }
    }

    BetaParams p_;
    double t_lo_ = 0, t_hi_ = 0, power_ = 1;
    std::vector<double> grid_, cum_, slope_;
    double head_mass_ = 0, head_bound_ = 0;
    double table_mass_ = 0;
    double tail_mass_ = 0, tail_bound_ = 1;
    double total_ = 0;
};

//---------------------------------------------------------------------------//
struct SampleBatch
{
    std::vector<double> values;
    BetaParams params;
    SamplerConfig config;
    SampleMethod method;
    double drift = 0;  //!< compensation for jumps below epsilon
    double jump_rate = 0;  //!< Levy mass of the simulated jumps
};

//! int_0^eps t k(t) dt, a bound on the mean error of the truncation
inline double truncation_error_report(BetaParams const& p, double epsilon)
{
    detail::require(p.M() == p.N(), Errc::Precondition, "truncation applies only to M = N");
    detail::require(epsilon >= 0, Errc::Precondition, "epsilon must be non-negative");
    if (epsilon == 0)
        return 0;
    return boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double t) { return t * levy_density(p, t); }, 0.0, epsilon);
}

//! int_0^eps k(t) dt, the mean of the discarded jumps
inline double truncation_drift(BetaParams const& p, double epsilon)
{
    return boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double t) { return levy_density(p, t); }, 0.0, epsilon);
}

/*!
 * Draw n variates of beta_{M,N}(a, b) as exp(-X) with X the value at time
 * one of the subordinator with Levy measure k(t) dt / t.
 *
 * M < N: X is compound Poisson and zero jumps give beta = 1 exactly.
 * M = N: jumps below epsilon are replaced by their mean.
 * Sample s uses stream (config.stream, s / batch_size), so the output
 * depends only on (params, n, config).
 */
inline SampleBatch
sample(BetaParams const& p, std::size_t n, SamplerConfig const& config = {})
{
    p.require_probabilistic("sample");
    detail::require(config.batch_size > 0, Errc::ConfigError, "batch size must be positive");
    detail::require(config.stream < (std::uint64_t{1} << 32),
                    Errc::ConfigError,
                    "stream index must fit in 32 bits");
    bool const poisson = p.M() < p.N();
    if (!poisson && !(config.epsilon > 0))
        detail::fail(Errc::ConfigError, "truncation epsilon must be positive");

    JumpTable const table(p, poisson ? 0.0 : config.epsilon, config.nodes);
    double const drift = poisson ? 0.0 : truncation_drift(p, config.epsilon);
    double const rate = table.total_mass();

    SampleBatch batch{{},
                      p,
                      config,
                      poisson ? SampleMethod::compound_poisson
                              : SampleMethod::truncated_levy,
                      drift,
                      rate};
    batch.values.reserve(n);
    std::size_t const nbatches = (n + config.batch_size - 1) / config.batch_size;
    for (std::size_t b = 0; b < nbatches; ++b)
    {
        Philox rng(config.seed, (config.stream << 32) | b);
        std::size_t const count = std::min(config.batch_size, n - b * config.batch_size);
        for (std::size_t s = 0; s < count; ++s)
        {
            double x = drift;
            double clock = rng.exponential();
            while (clock < rate)
            {
                x += table.draw(rng);
                clock += rng.exponential();
            }
            batch.values.push_back(std::exp(-x));
        }
    }
    return batch;
}

//---------------------------------------------------------------------------//
struct MellinEstimate
{
    cplx estimate;
    double std_error = 0;
};

//! Sample mean of beta^q with its plug-in standard error
inline MellinEstimate empirical_mellin(std::span<double const> values, cplx q)
{
    detail::require(values.size() >= 2, Errc::Precondition, "need at least two samples");
    std::vector<cplx> powers;
    powers.reserve(values.size());
    cplx sum = 0;
    for (double v : values)
    {
        cplx const x = q == cplx(0.0) ? cplx(1.0) : std::exp(q * std::log(v));
        powers.push_back(x);
        sum += x;
    }
    double const n = static_cast<double>(values.size());
    cplx const mean = sum / n;
    double ss = 0;
    for (cplx x : powers)
        ss += std::norm(x - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

inline MellinEstimate empirical_mellin(SampleBatch const& batch, cplx q)
{
    return empirical_mellin(std::span<double const>(batch.values), q);
}

//---------------------------------------------------------------------------//
// EXPORT
//---------------------------------------------------------------------------//
inline std::string format_g17(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

//! One value per line, 17 significant digits
inline void write_csv(SampleBatch const& batch, std::ostream& os)
{
    for (double v : batch.values)
        os << format_g17(v) << '\n';
}

}  // namespace barnes
