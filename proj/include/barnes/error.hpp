#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Pole of a multiple gamma function.
 *
 * The poles of Gamma_M(w|a) sit on the lattice -(k_1 a_1 + ... + k_M a_M);
 * the multiplicity counts the tuples k that land on the same point.
 */
struct PoleReport
{
    std::complex<double> location;
    unsigned multiplicity = 1;
};

enum class Errc
{
    OnCut,
    NearPole,
    QuadratureFailure,
    BudgetExceeded,
    OutOfOracleRegime,
    ArgOutOfRange,
    MethodDomain,
    NotCompoundPoisson,
    AssertionFailure,
    MomentDomain,
    NonConvergence,
    NotMultiple,
    Precondition,
    ModeError,
    ConfigError,
    ParamDomain,
    MellinDomain,
};

inline char const* to_string(Errc e)
{
    switch (e)
    {
        case Errc::OnCut: return "OnCut";
        case Errc::NearPole: return "NearPole";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::OutOfOracleRegime: return "OutOfOracleRegime";
        case Errc::ArgOutOfRange: return "ArgOutOfRange";
        case Errc::MethodDomain: return "MethodDomain";
        case Errc::NotCompoundPoisson: return "NotCompoundPoisson";
        case Errc::AssertionFailure: return "AssertionFailure";
        case Errc::MomentDomain: return "MomentDomain";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::NotMultiple: return "NotMultiple";
        case Errc::Precondition: return "Precondition";
        case Errc::ModeError: return "ModeError";
        case Errc::ConfigError: return "ConfigError";
        case Errc::ParamDomain: return "ParamDomain";
        case Errc::MellinDomain: return "MellinDomain";
    }
    return "Unknown";
}

//---------------------------------------------------------------------------//
/*!
 * Library error: a category code plus optional pole and subset context.
 */
class Error : public std::runtime_error
{
  public:
    Error(Errc code, std::string const& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    Error(PoleReport pole, std::string const& what)
        : Error(Errc::NearPole, what)
    {
        pole_ = pole;
    }

    Errc code() const noexcept { return code_; }
    std::optional<PoleReport> const& pole() const noexcept { return pole_; }

    //! Indices (1-based into b) of the S_N subset whose evaluation failed
    std::optional<std::vector<std::size_t>> const& subset() const noexcept
    {
        return subset_;
    }

    Error with_subset(std::vector<std::size_t> subset) const
    {
        Error copy = *this;
        copy.subset_ = std::move(subset);
        return copy;
    }

  private:
    Errc code_;
    std::optional<PoleReport> pole_;
    std::optional<std::vector<std::size_t>> subset_;
};

namespace detail
{
[[noreturn]] inline void fail(Errc code, std::string const& what)
{
    throw Error(code, what);
}

inline void require(bool cond, Errc code, std::string const& what)
{
    if (!cond)
        fail(code, what);
}
}  // namespace detail

}  // namespace barnes
