#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "error.hpp"
#include "gamma_params.hpp"
#include "multiple_gamma.hpp"
#include "quadrature.hpp"
#include "s_operator.hpp"

namespace barnes
{
enum class Mode
{
    probabilistic,
    analytic,
};

inline char const* to_string(Mode m)
{
    return m == Mode::probabilistic ? "probabilistic" : "analytic";
}

//---------------------------------------------------------------------------//
/*!
 * Parameters (a, b) of a Barnes beta distribution beta_{M,N}(a, b).
 *
 * Probabilistic mode requires b_j > 0 for every j and M <= N; these are the
 * parameter sets for which eta is a Mellin transform and the sampling,
 * atom, positivity and Laplace operations are available. Analytic mode
 * only requires every subset sum b_0 + b_{k_1} + ... to be positive, which
 * keeps every Gamma_M argument of eta(0) off the cut.
 *
 * The 2^N subset shifts and the value of (S_N L_M)(0|b) are computed once
 * and shared between copies.
 */
class BetaParams
{
  public:
    BetaParams(GammaParams gamma, std::vector<double> b, Mode mode)
        : gamma_(std::move(gamma)), b_(std::move(b)), mode_(mode)
    {
        detail::require(!b_.empty(), Errc::Precondition, "b must contain b_0");
        for (double bj : b_)
            detail::require(std::isfinite(bj),
                            Errc::Precondition,
                            "b entries must be finite");
        if (mode_ == Mode::probabilistic)
        {
            for (double bj : b_)
            {
                if (!(bj > 0))
                {
                    std::ostringstream os;
                    os << "probabilistic mode requires b_j > 0 (got " << bj
                       << ")";
                    detail::fail(Errc::ModeError, os.str());
                }
            }
            detail::require(gamma_.order() <= N(),
                            Errc::ModeError,
                            "probabilistic mode requires M <= N");
        }
        state_ = std::make_shared<State>();
        state_->shifts = subset_shifts(b_);
        for (auto const& s : state_->shifts)
        {
            if (!(s.shift > 0))
            {
                std::ostringstream os;
                os << "subset sum " << s.shift << " must be positive";
                detail::fail(Errc::Precondition, os.str());
            }
        }
    }

    static BetaParams probabilistic(GammaParams gamma, std::vector<double> b)
    {
        return {std::move(gamma), std::move(b), Mode::probabilistic};
    }

    static BetaParams analytic(GammaParams gamma, std::vector<double> b)
    {
        return {std::move(gamma), std::move(b), Mode::analytic};
    }

    /*!
     * Derived parameter set: probabilistic when the constraints allow and
     * the parent was probabilistic, analytic otherwise.
     */
    BetaParams derive(GammaParams gamma, std::vector<double> b) const
    {
        bool ok = mode_ == Mode::probabilistic && gamma.order() + 1 <= b.size();
        for (double bj : b)
            ok = ok && bj > 0;
        return {std::move(gamma),
                std::move(b),
                ok ? Mode::probabilistic : Mode::analytic};
    }

    GammaParams const& gamma() const noexcept { return gamma_; }
    std::size_t M() const noexcept { return gamma_.order(); }
    std::size_t N() const noexcept { return b_.size() - 1; }
    std::span<double const> b() const noexcept { return b_; }
    double b0() const noexcept { return b_[0]; }
    Mode mode() const noexcept { return mode_; }

    std::span<SubsetShift const> shifts() const noexcept
    {
        return state_->shifts;
    }

    //! Smallest subset sum; eta is holomorphic for q off (-inf, -min_shift]
    double min_shift() const noexcept
    {
        double m = b_[0];
        for (auto const& s : state_->shifts)
            m = std::min(m, s.shift);
        return m;
    }

    //! b_1 ... b_N
    double b_product() const noexcept
    {
        double p = 1;
        for (std::size_t j = 1; j < b_.size(); ++j)
            p *= b_[j];
        return p;
    }

    //! Same a, b_0 replaced
    BetaParams with_b0(double b0) const
    {
        auto b = b_;
        b[0] = b0;
        return derive(gamma_, std::move(b));
    }

    //! Same a, b_j replaced (j >= 1)
    BetaParams with_b(std::size_t j, double value) const
    {
        check_b_index(j);
        auto b = b_;
        b[j] = value;
        return derive(gamma_, std::move(b));
    }

    //! b-hat_j: b_j removed (j >= 1)
    BetaParams without_b(std::size_t j) const
    {
        check_b_index(j);
        auto b = b_;
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(j));
        return derive(gamma_, std::move(b));
    }

    //! a-hat_i: a_i removed (0-based i)
    BetaParams without_a(std::size_t i) const
    {
        return derive(gamma_.without(i), b_);
    }

    //! a-hat_i and b-hat_j together
    BetaParams without_a_b(std::size_t i, std::size_t j) const
    {
        check_b_index(j);
        auto b = b_;
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(j));
        return derive(gamma_.without(i), std::move(b));
    }

    void require_probabilistic(char const* what) const
    {
        if (mode_ != Mode::probabilistic)
            detail::fail(Errc::ModeError,
                         std::string(what) + " requires probabilistic mode");
    }

    //! Cached (S_N L_M)(0|b) for the given quadrature settings
    template<class Compute>
    LogGammaValue cached_sn_zero(QuadratureSpec const& quad,
                                 Compute&& compute) const
    {
        {
            std::lock_guard lock(state_->mutex);
            for (auto const& [spec, value] : state_->sn_zero)
                if (spec == quad)
                    return value;
        }
        LogGammaValue value = compute();
        std::lock_guard lock(state_->mutex);
        state_->sn_zero.emplace_back(quad, value);
        return value;
    }

  private:
    struct State
    {
        std::vector<SubsetShift> shifts;
        std::mutex mutex;
        std::vector<std::pair<QuadratureSpec, LogGammaValue>> sn_zero;
    };

    void check_b_index(std::size_t j) const
    {
        detail::require(j >= 1 && j < b_.size(),
                        Errc::Precondition,
                        "b index must be in 1..N");
    }

    GammaParams gamma_;
    std::vector<double> b_;
    Mode mode_;
    std::shared_ptr<State> state_;
};

}  // namespace barnes
