#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barnes/barnes.hpp"

namespace barnes::cli
{
using json = nlohmann::ordered_json;

enum ExitCode : int
{
    exit_ok = 0,
    exit_verification_failure = 1,
    exit_config_parse = 2,
    exit_evaluation_error = 3,
};

//! Malformed or inconsistent configuration
struct ConfigParse : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string command;
    std::string params_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::string suite = "all";
};

//---------------------------------------------------------------------------//
// TABLES
//---------------------------------------------------------------------------//
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json meta = json::object();
};

inline std::string csv_cell(json const& v)
{
    if (v.is_number_float())
        return format_g17(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "";
    return v.dump();
}

inline void write_table(Table const& t, std::string const& format, std::ostream& os)
{
    if (format == "json")
    {
        json out;
        out["meta"] = t.meta;
        json rows = json::array();
        for (auto const& row : t.rows)
        {
            json r;
            for (std::size_t c = 0; c < t.columns.size(); ++c)
                r[t.columns[c]] = row[c];
            rows.push_back(r);
        }
        out["rows"] = rows;
        os << out.dump(2) << '\n';
        return;
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (auto const& row : t.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << csv_cell(row[c]);
        os << '\n';
    }
}

//---------------------------------------------------------------------------//
// PARAMETER PARSING
//---------------------------------------------------------------------------//
inline json read_params(std::string const& path)
{
    if (path.empty())
        return json::object();
    std::ifstream in(path);
    if (!in)
        throw ConfigParse("cannot open params file '" + path + "'");
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (json::exception const& e)
    {
        throw ConfigParse(std::string("params file: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigParse("params file must hold a JSON object");
    return j;
}

inline std::vector<double> number_array(json const& j, char const* key)
{
    if (!j.contains(key))
        return {};
    auto const& v = j.at(key);
    if (!v.is_array())
        throw ConfigParse(std::string("'") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (auto const& x : v)
    {
        if (!x.is_number())
            throw ConfigParse(std::string("'") + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline double number(json const& j, char const* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw ConfigParse(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::size_t count(json const& j, char const* key, std::size_t fallback)
{
    if (!j.contains(key))
        return fallback;
    auto const& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigParse(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

inline cplx parse_complex(json const& v)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigParse("expected a number or an [re, im] pair, got " + v.dump());
}

/*!
 * A grid is a number, a list of numbers and [re, im] pairs, or
 * {"start", "stop", "count"} for evenly spaced real values.
 */
inline std::vector<cplx> parse_grid(json const& j, char const* key)
{
    if (!j.contains(key))
        throw ConfigParse(std::string("missing '") + key + "'");
    auto const& v = j.at(key);
    std::vector<cplx> out;
    if (v.is_number())
    {
        out.push_back(v.get<double>());
    }
    else if (v.is_array())
    {
        for (auto const& x : v)
            out.push_back(parse_complex(x));
    }
    else if (v.is_object())
    {
        double const start = number(v, "start", 0);
        double const stop = number(v, "stop", 0);
        std::size_t const n = count(v, "count", 0);
        if (n == 0)
            throw ConfigParse(std::string("'") + key + ".count' must be positive");
        for (std::size_t k = 0; k < n; ++k)
            out.push_back(n == 1 ? start
                                 : start + (stop - start) * static_cast<double>(k)
                                               / static_cast<double>(n - 1));
    }
    else
    {
        throw ConfigParse(std::string("'") + key + "' has an unsupported grid format");
    }
    return out;
}

inline bool all_real(std::vector<cplx> const& v)
{
    for (cplx z : v)
        if (z.imag() != 0)
            return false;
    return true;
}

inline GammaParams parse_gamma(json const& j)
{
    return GammaParams(number_array(j, "a"));
}

inline BetaParams parse_beta(json const& j)
{
    if (!j.contains("b"))
        throw ConfigParse("missing 'b'");
    std::string const mode = j.value("mode", std::string("probabilistic"));
    if (mode != "probabilistic" && mode != "analytic")
        throw ConfigParse("'mode' must be 'probabilistic' or 'analytic'");
    return BetaParams(parse_gamma(j),
                      number_array(j, "b"),
                      mode == "analytic" ? Mode::analytic : Mode::probabilistic);
}

inline QuadratureSpec parse_quad(json const& j, std::optional<double> tol)
{
    QuadratureSpec q;
    if (j.contains("quadrature"))
    {
        auto const& s = j.at("quadrature");
        q.abs_tol = number(s, "abs_tol", q.abs_tol);
        q.rel_tol = number(s, "rel_tol", q.rel_tol);
        q.split_point = number(s, "split_point", q.split_point);
        q.series_order = static_cast<int>(count(s, "series_order", q.series_order));
        q.max_refinements = static_cast<int>(count(s, "max_refinements", q.max_refinements));
    }
    if (tol)
    {
        q.rel_tol = *tol;
        q.abs_tol = 0.1 * *tol;
    }
    if (!(q.abs_tol > 0 && q.rel_tol > 0))
        throw ConfigParse("quadrature tolerances must be positive");
    return q;
}

//! 1-based index in the params file, 0-based in the library
inline std::size_t parse_index(json const& j, char const* key, std::size_t size)
{
    std::size_t const i = count(j, key, 1);
    if (i < 1 || i > size)
        throw ConfigParse(std::string("'") + key + "' must be in 1.." + std::to_string(size));
    return i - 1;
}

inline SelbergParams parse_selberg(json const& j)
{
    SelbergParams p;
    p.mu = number(j, "mu", p.mu);
    p.lambda1 = number(j, "lambda1", p.lambda1);
    p.lambda2 = number(j, "lambda2", p.lambda2);
    p.l = static_cast<unsigned>(count(j, "l", 0));
    p.validate(p.l > 0);
    return p;
}

inline json params_json(BetaParams const& p)
{
    json j;
    j["M"] = p.M();
    j["N"] = p.N();
    j["a"] = std::vector<double>(p.gamma().scales().begin(), p.gamma().scales().end());
    j["b"] = std::vector<double>(p.b().begin(), p.b().end());
    j["mode"] = to_string(p.mode());
    return j;
}

inline json params_json(SelbergParams const& p)
{
    json j;
    j["mu"] = p.mu;
    j["lambda1"] = p.lambda1;
    j["lambda2"] = p.lambda2;
    j["l"] = p.l;
    j["tau"] = p.tau();
    return j;
}

inline json complex_json(cplx z)
{
    if (z.imag() == 0)
        return z.real();
    return json::array({z.real(), z.imag()});
}

//---------------------------------------------------------------------------//
// COMMANDS
//---------------------------------------------------------------------------//
//! Parsing happens in the first stage, evaluation in the returned closure
using Stage = std::function<int(std::ostream&)>;

struct Context
{
    RunConfig config;
    json params;
    QuadratureSpec quad;
};

inline Stage cmd_eval_gamma(Context const& ctx)
{
    GammaParams const g = parse_gamma(ctx.params);
    auto const w = parse_grid(ctx.params, "w");
    return [=](std::ostream& os) {
        Table t;
        bool const real = all_real(w);
        t.columns = real ? std::vector<std::string>{"w", "log_gamma", "error"}
                         : std::vector<std::string>{"w_re", "w_im", "log_gamma_re",
                                                    "log_gamma_im", "error"};
        t.meta["command"] = "eval-gamma";
        t.meta["a"] = std::vector<double>(g.scales().begin(), g.scales().end());
        for (cplx z : w)
        {
            auto const v = log_gamma_m_with_error(g, z, ctx.quad);
            if (real)
                t.rows.push_back({z.real(), v.value.real(), v.error});
            else
                t.rows.push_back({z.real(), z.imag(), v.value.real(),
                                  v.value.imag(), v.error});
        }
        write_table(t, ctx.config.format, os);
        return exit_ok;
    };
}

inline EtaMethod parse_method(json const& j)
{
    std::string const m = j.value("method", std::string("direct-SN"));
    if (m == "direct-SN")
        return EtaMethod::direct_sn;
    if (m == "levy-integral")
        return EtaMethod::levy_integral;
    if (m == "shintani-K")
        return EtaMethod::shintani;
    throw ConfigParse("'method' must be direct-SN, levy-integral or shintani-K");
}

inline Stage cmd_eval_eta(Context const& ctx)
{
    BetaParams const p = parse_beta(ctx.params);
    auto const q = parse_grid(ctx.params, "q");
    EtaMethod const method = parse_method(ctx.params);
    return [=](std::ostream& os) {
        Table t;
        bool const real = all_real(q);
        bool const json_out = ctx.config.format == "json";
        t.columns = real ? std::vector<std::string>{"q", "eta"}
                         : std::vector<std::string>{"q_re", "q_im", "eta_re", "eta_im"};
        if (json_out)
            t.columns.push_back("est_error");
        t.meta["command"] = "eval-eta";
        t.meta["params"] = params_json(p);
        t.meta["method"] = to_string(method);
        for (cplx z : q)
        {
            auto const v = mellin_eta(p, z, ctx.quad, method);
            std::vector<json> row;
            if (real)
                row = {z.real(), v.value.real()};
            else
                row = {z.real(), z.imag(), v.value.real(), v.value.imag()};
            if (json_out)
                row.push_back(v.est_error);
            t.rows.push_back(std::move(row));
        }
        write_table(t, ctx.config.format, os);
        return exit_ok;
    };
}

inline Stage cmd_moments(Context const& ctx)
{
    BetaParams const p = parse_beta(ctx.params);
    if (p.M() < 1)
        throw ConfigParse("moments need M >= 1");
    std::size_t const i = parse_index(ctx.params, "i", p.M());
    std::vector<std::size_t> ks;
    if (ctx.params.contains("k") && ctx.params.at("k").is_array())
        for (auto const& k : ctx.params.at("k"))
            ks.push_back(k.get<std::size_t>());
    else
        for (std::size_t k = 1; k <= count(ctx.params, "k", 3); ++k)
            ks.push_back(k);
    std::string const sign = ctx.params.value("sign", std::string("+"));
    if (sign != "+" && sign != "-" && sign != "both")
        throw ConfigParse("'sign' must be '+', '-' or 'both'");
    return [=](std::ostream& os) {
        Table t;
        t.columns = {"k", "sign", "moment", "eta", "rel_diff"};
        t.meta["command"] = "moments";
        t.meta["params"] = params_json(p);
        t.meta["i"] = i + 1;
        double const ai = p.gamma().scale(i);
        for (char s : std::string(sign == "both" ? "+-" : sign))
        {
            MomentSign const ms = s == '+' ? MomentSign::positive : MomentSign::negative;
            for (std::size_t k : ks)
            {
                double const m = integer_moments(p, i, k, ms, ctx.quad);
                double const q = (s == '+' ? 1.0 : -1.0) * static_cast<double>(k) * ai;
                double const e = mellin_eta(p, q, ctx.quad).value.real();
                t.rows.push_back({k, std::string(1, s), m, e, std::abs(m - e) / std::abs(e)});
            }
        }
        write_table(t, ctx.config.format, os);
        return exit_ok;
    };
}

inline Stage cmd_laplace(Context const& ctx)
{
    BetaParams const p = parse_beta(ctx.params);
    p.require_probabilistic("laplace");
    if (p.M() < 1)
        throw ConfigParse("laplace needs M >= 1");
    std::size_t const i = parse_index(ctx.params, "i", p.M());
    auto const xs = parse_grid(ctx.params, "x");
    if (!all_real(xs))
        throw ConfigParse("'x' must be real");
    return [=](std::ostream& os) {
        LaplaceSeries const series(p, i, ctx.quad);
        Table t;
        t.columns = {"x", "laplace", "terms", "bound"};
        t.meta["command"] = "laplace";
        t.meta["params"] = params_json(p);
        t.meta["i"] = i + 1;
        t.meta["truncation"] = "moments non-increasing: m_{K+1} x^{K+1}/(K+1)!/(1-x/(K+2))";
        for (cplx x : xs)
        {
            auto const r = series(x.real());
            t.rows.push_back({x.real(), r.value, r.terms, r.bound});
        }
        write_table(t, ctx.config.format, os);
        return exit_ok;
    };
}

inline json sidecar_json(SampleBatch const& batch)
{
    json j;
    j["params"] = params_json(batch.params);
    j["n"] = batch.values.size();
    j["seed"] = batch.config.seed;
    j["stream"] = batch.config.stream;
    j["method"] = to_string(batch.method);
    if (batch.method == SampleMethod::truncated_levy)
    {
        j["epsilon"] = batch.config.epsilon;
        j["drift"] = batch.drift;
        j["truncation_error_bound"]
            = truncation_error_report(batch.params, batch.config.epsilon);
    }
    else
    {
        j["epsilon"] = nullptr;
        j["drift"] = 0.0;
    }
    j["jump_rate"] = batch.jump_rate;
    j["nodes"] = batch.config.nodes;
    j["batch_size"] = batch.config.batch_size;
    return j;
}

inline Stage cmd_sample(Context const& ctx)
{
    BetaParams const p = parse_beta(ctx.params);
    p.require_probabilistic("sample");
    std::size_t const n = count(ctx.params, "n", 1000);
    SamplerConfig cfg;
    cfg.seed = ctx.config.seed;
    cfg.stream = count(ctx.params, "stream", 0);
    cfg.epsilon = number(ctx.params, "epsilon", cfg.epsilon);
    cfg.nodes = count(ctx.params, "nodes", cfg.nodes);
    cfg.batch_size = count(ctx.params, "batch_size", cfg.batch_size);
    return [=](std::ostream& os) {
        auto const batch = sample(p, n, cfg);
        json const meta = sidecar_json(batch);
        if (ctx.config.format == "json")
        {
            json out;
            out["meta"] = meta;
            out["values"] = batch.values;
            os << out.dump(2) << '\n';
        }
        else
        {
            write_csv(batch, os);
        }
        if (!ctx.config.out_path.empty())
        {
            std::ofstream side(ctx.config.out_path + ".json");
            side << meta.dump(2) << '\n';
        }
        return exit_ok;
    };
}

//---------------------------------------------------------------------------//
// VERIFY
//---------------------------------------------------------------------------//
struct Check
{
    std::string suite;
    std::string check;
    double value;
    double tolerance;
    std::string status;
};

struct VerifyInputs
{
    BetaParams beta;
    std::vector<SelbergParams> selberg;
    QuadratureSpec quad;
    std::uint64_t seed;
};

inline std::vector<std::string> const& suite_names()
{
    static std::vector<std::string> const names{
        "functional-equation", "symmetries", "shintani", "bernoulli",
        "reduction", "ramanujan", "selberg-decomposition"};
    return names;
}

inline double rel(cplx x, cplx y)
{
    return std::abs(x - y) / std::abs(y);
}

inline void add(std::vector<Check>& out,
                std::string const& suite,
                std::string const& check,
                double value,
                double tol)
{
    out.push_back({suite, check, value, tol,
                   std::isfinite(value) && value <= tol ? "pass" : "fail"});
}

inline void skip(std::vector<Check>& out, std::string const& suite, std::string const& why)
{
    out.push_back({suite, why, 0.0, 0.0, "skip"});
}

inline std::string label(char const* name, cplx q)
{
    std::ostringstream os;
    os.precision(6);
    os << name << "(" << q.real();
    if (q.imag() != 0)
        os << (q.imag() < 0 ? "" : "+") << q.imag() << "i";
    os << ")";
    return os.str();
}

inline cplx random_q(Philox& rng)
{
    return {0.1 + 1.9 * rng.uniform(), -1 + 2 * rng.uniform()};
}

inline void suite_functional_equation(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "functional-equation";
    auto const& p = in.beta;
    if (p.M() < 1)
        return skip(out, s, "needs M >= 1");
    Philox rng(in.seed, 1);
    GammaParams const& g = p.gamma();
    for (std::size_t i = 0; i < p.M(); ++i)
    {
        GammaParams const lower = g.without(i);
        for (int n = 0; n < 3; ++n)
        {
            cplx const w = random_q(rng) + 0.2;
            cplx const r = log_gamma_m(g, w, in.quad) - log_gamma_m(g, w + g.scale(i), in.quad)
                           - log_gamma_m(lower, w, in.quad);
            add(out, s, label(("L_M i=" + std::to_string(i + 1) + " w").c_str(), w),
                std::abs(r), 10 * in.quad.abs_tol);
            cplx const q = random_q(rng);
            cplx const lhs = eta_direct(p, q + g.scale(i), in.quad).value;
            cplx const rhs = functional_equation_rhs(p, q, i, in.quad).value;
            add(out, s, label(("eta i=" + std::to_string(i + 1) + " q").c_str(), q),
                rel(rhs, lhs), 1e-9);
        }
    }
}

inline void suite_symmetries(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "symmetries";
    auto const& p = in.beta;
    if (p.M() < 1 || p.N() < 1)
        return skip(out, s, "needs M >= 1 and N >= 1");
    Philox rng(in.seed, 2);
    char const* names[] = {"fe2", "fe3", "fe1eq", "fe4", "funceqsymmetry"};
    for (int n = 0; n < 4; ++n)
    {
        cplx const q = random_q(rng);
        double const x = rng.uniform();
        std::size_t const i = static_cast<std::size_t>(rng.uniform() * p.M());
        std::size_t const j = 1 + static_cast<std::size_t>(rng.uniform() * p.N());
        auto const r = symmetry_residuals(p, q, x, i, j, in.quad);
        for (int k = 0; k < 5; ++k)
            add(out, s, label(names[k], q), r[k], 1e-9);
    }
}

inline void suite_shintani(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "shintani";
    auto const& p = in.beta;
    if (p.M() < 1 || p.N() < 1 || p.M() > p.N())
        return skip(out, s, "needs 1 <= M <= N");
    for (cplx q : {cplx(0.7), cplx(1.5, 0.5), cplx(-0.3 * p.min_shift()), cplx(3.0, -1.0)})
    {
        cplx const ref = eta_direct(p, q, in.quad).value;
        add(out, s, label("levy-integral q", q),
            rel(eta_levy(p, q, in.quad).value, ref), 1e-6);
        for (int v = 1; v <= 3; ++v)
        {
            auto const sh = shintani_product(p, q, v, std::size_t{1}, in.quad);
            add(out, s, label(("shintani-" + std::to_string(v) + " q").c_str(), q),
                rel(sh.eta.value, ref), 1e-6);
        }
    }
}

inline void suite_bernoulli(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "bernoulli";
    auto const& p = in.beta;
    Philox rng(in.seed, 4);
    int const N = static_cast<int>(p.N());
    double expected = p.gamma().f0();
    for (int n = 1; n <= N; ++n)
        expected *= n * p.b()[static_cast<std::size_t>(n)];
    for (int k = 0; k < 5; ++k)
    {
        cplx const q = random_q(rng);
        for (int n = 0; n <= N; ++n)
        {
            auto const v = sn_bernoulli(p, n, q);
            std::string const name = "S_N B_" + std::to_string(n) + " q";
            if (n < N)
                add(out, s, label(name.c_str(), q),
                    std::abs(v.value) / std::max(v.scale, 1e-300), 1e-9);
            else
                add(out, s, label(name.c_str(), q), rel(v.value, expected), 1e-9);
        }
    }
}

inline void suite_reduction(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "reduction";
    auto const& p0 = in.beta;
    if (p0.M() < 1 || p0.N() < 1)
        return skip(out, s, "needs M >= 1 and N >= 1");
    BetaParams const p = p0.with_b(1, 2 * p0.gamma().scale(0));
    auto const factors = reduction_factors(p, 0, 1);
    for (cplx q : {cplx(0.5), cplx(1.2, 0.8), cplx(-0.4 * p.min_shift())})
    {
        cplx prod = 1;
        for (auto const& f : factors)
            prod *= eta_direct(f, q, in.quad).value;
        add(out, s, label("b_1=2a_1 q", q), rel(prod, eta_direct(p, q, in.quad).value), 1e-9);
    }
}

inline void suite_ramanujan(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "ramanujan";
    auto const& p = in.beta;
    if (p.M() < 1 || p.mode() != Mode::probabilistic)
        return skip(out, s, "needs M >= 1 and probabilistic mode");
    double const qmax = p.b0() / p.gamma().scale(0);
    for (double frac : {0.25, 0.5})
    {
        auto const r = ramanujan_check(p, 0, frac * qmax, in.quad);
        add(out, s, label("q", frac * qmax), r.rel_diff, 1e-6);
    }
}

inline std::vector<cplx> decomposition_grid(SelbergParams const& p)
{
    std::vector<cplx> q;
    double const hi = 0.9 * std::min(p.tau(), 1.0);
    double const lo = -0.9;
    for (int k = 0; k < 13; ++k)
        q.push_back(lo + (hi - lo) * k / 12.0);
    q.push_back({0.3, 0.5});
    q.push_back({-0.4, -0.8});
    return q;
}

inline void suite_selberg(VerifyInputs const& in, std::vector<Check>& out)
{
    std::string const s = "selberg-decomposition";
    for (auto const& sp : in.selberg)
    {
        std::ostringstream tag;
        tag << "mu=" << sp.mu << " l1=" << sp.lambda1 << " l2=" << sp.lambda2 << " ";
        MellinM const mellin(sp, in.quad);
        for (unsigned l = 1; l < sp.tau(); ++l)
        {
            SelbergParams pl = sp;
            pl.l = l;
            add(out, s, tag.str() + "moment l=" + std::to_string(l),
                rel(mellin(double(l)), selberg_product(pl)), 1e-6);
        }
        for (cplx q : decomposition_grid(sp))
            add(out, s, tag.str() + label("factors q", q),
                rel(factor_mellin_product(sp, q, in.quad), mellin(q)), 1e-6);
    }
}

inline std::vector<Check> run_suites(VerifyInputs const& in, std::string const& suite)
{
    std::vector<Check> out;
    using Fn = void (*)(VerifyInputs const&, std::vector<Check>&);
    std::vector<std::pair<std::string, Fn>> const table{
        {"functional-equation", suite_functional_equation},
        {"symmetries", suite_symmetries},
        {"shintani", suite_shintani},
        {"bernoulli", suite_bernoulli},
        {"reduction", suite_reduction},
        {"ramanujan", suite_ramanujan},
        {"selberg-decomposition", suite_selberg},
    };
    for (auto const& [name, fn] : table)
        if (suite == "all" || suite == name)
            fn(in, out);
    return out;
}

inline Stage cmd_verify(Context const& ctx)
{
    auto const& suite = ctx.config.suite;
    bool known = suite == "all";
    for (auto const& n : suite_names())
        known = known || n == suite;
    if (!known)
        throw ConfigParse("unknown suite '" + suite + "'");

    json const& j = ctx.params;
    json beta_json = j.contains("b") ? j
                                     : json{{"a", {1.0, 1.7}}, {"b", {0.8, 1.3, 0.6}}};
    VerifyInputs in{parse_beta(beta_json), {}, ctx.quad, ctx.config.seed};
    if (j.contains("selberg"))
    {
        auto const& sj = j.at("selberg");
        if (sj.is_array())
            for (auto const& x : sj)
                in.selberg.push_back(parse_selberg(x));
        else
            in.selberg.push_back(parse_selberg(sj));
    }
    else
    {
        in.selberg = {{0.5, 0, 0, 0}, {0.5, 0.25, 0.5, 0}, {1, 0, 0.3, 0}};
    }
    return [=](std::ostream& os) {
        auto const checks = run_suites(in, suite);
        Table t;
        t.columns = {"suite", "check", "value", "tolerance", "status"};
        t.meta["command"] = "verify";
        t.meta["suite"] = suite;
        t.meta["params"] = params_json(in.beta);
        bool ok = true;
        for (auto const& c : checks)
        {
            t.rows.push_back({c.suite, c.check, c.value, c.tolerance, c.status});
            ok = ok && c.status != "fail";
        }
        t.meta["result"] = ok ? "pass" : "fail";
        write_table(t, ctx.config.format, os);
        return ok ? exit_ok : exit_verification_failure;
    };
}

//---------------------------------------------------------------------------//
// SELBERG
//---------------------------------------------------------------------------//
inline Stage cmd_selberg(Context const& ctx)
{
    SelbergParams const p = parse_selberg(ctx.params);
    std::size_t const mc = count(ctx.params, "mc_samples", 0);
    if (mc > 0 && p.l == 0)
        throw ConfigParse("'mc_samples' needs 'l'");
    std::vector<cplx> grid = ctx.params.contains("q") ? parse_grid(ctx.params, "q")
                                                      : decomposition_grid(p);
    return [=](std::ostream& os) {
        auto const report = interpret_chain_report(p, 1e-6, mc, ctx.config.seed, ctx.quad);
        MellinM const mellin(p, ctx.quad);
        struct Row
        {
            std::string kind;
            cplx q, lhs, rhs;
            double rel_err;
        };
        std::vector<Row> rows;
        for (auto const& c : report.moment_checks)
            rows.push_back({"moment", c.q, c.lhs, c.rhs, c.rel_err});
        for (cplx q : grid)
        {
            cplx const lhs = factor_mellin_product(p, q, ctx.quad);
            cplx const rhs = mellin(q);
            rows.push_back({"decomposition", q, lhs, rhs, rel(lhs, rhs)});
        }
        bool ok = true;
        for (auto const& r : rows)
            ok = ok && r.rel_err < 1e-6;

        if (ctx.config.format == "json")
        {
            json out;
            out["params"] = params_json(p);
            out["product_value"] = report.product_value ? json(*report.product_value) : json();
            out["mc_estimate"] = report.mc ? json(report.mc->estimate) : json();
            out["mc_stderr"] = report.mc ? json(report.mc->std_error) : json();
            if (report.mc)
                out["mc_variance_warning"] = report.mc->variance_warning;
            json checks = json::array();
            for (auto const& r : rows)
                checks.push_back({{"kind", r.kind},
                                  {"q", complex_json(r.q)},
                                  {"lhs", complex_json(r.lhs)},
                                  {"rhs", complex_json(r.rhs)},
                                  {"rel_err", r.rel_err}});
            out["mellin_checks"] = checks;
            auto const& f = report.factors;
            out["mode_flags"] = {{"X1", to_string(f.X1.mode())},
                                 {"X2", to_string(f.X2.mode())},
                                 {"X3", to_string(f.X3.mode())}};
            out["integrand_law"] = {{"family", "beta_{1,1}"},
                                    {"params", params_json(report.integrand_law)},
                                    {"uniform", report.integrand_uniform}};
            out["factors"] = {{"constant", f.constant},
                              {"L_log_variance", f.lognormal_variance},
                              {"X1", params_json(f.X1)},
                              {"X2", params_json(f.X2)},
                              {"X3", params_json(f.X3)},
                              {"Y_shape", f.frechet_shape}};
            out["moment_identity"] = report.moments_pass ? "pass" : "fail";
            out["result"] = ok ? "pass" : "fail";
            os << out.dump(2) << '\n';
        }
        else
        {
            Table t;
            t.columns = {"kind", "q_re", "q_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err"};
            for (auto const& r : rows)
                t.rows.push_back({r.kind, r.q.real(), r.q.imag(), r.lhs.real(),
                                  r.lhs.imag(), r.rhs.real(), r.rhs.imag(), r.rel_err});
            write_table(t, "csv", os);
        }
        return ok ? exit_ok : exit_verification_failure;
    };
}

//---------------------------------------------------------------------------//
/*!
 * Parse arguments, run one command and return the exit status. Output goes
 * to --out when given, otherwise to `out`; diagnostics go to `err`.
 */
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Barnes multiple gamma functions and Barnes beta distributions"};
    app.require_subcommand(1);
    RunConfig cfg;
    double tol = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--params", cfg.params_path, "JSON parameter file");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol", tol, "quadrature relative tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
    };
    std::vector<std::pair<std::string, Stage (*)(Context const&)>> const commands{
        {"eval-gamma", cmd_eval_gamma},
        {"eval-eta", cmd_eval_eta},
        {"moments", cmd_moments},
        {"laplace", cmd_laplace},
        {"sample", cmd_sample},
        {"verify", cmd_verify},
        {"selberg", cmd_selberg},
    };
    std::vector<CLI::App*> subs;
    for (auto const& [name, fn] : commands)
    {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        if (name == "verify")
            sub->add_option("--suite", cfg.suite, "identity suite or 'all'");
        subs.push_back(sub);
    }

    try
    {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config_parse;
    }

    Stage stage;
    try
    {
        for (std::size_t k = 0; k < subs.size(); ++k)
            if (subs[k]->parsed())
                cfg.command = commands[k].first;
        if (tol > 0)
            cfg.tol = tol;
        Context ctx{cfg, read_params(cfg.params_path), {}};
        ctx.quad = parse_quad(ctx.params, cfg.tol);
        for (auto const& [name, fn] : commands)
            if (name == cfg.command)
                stage = fn(ctx);
    }
    catch (ConfigParse const& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_config_parse;
    }
    catch (Error const& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_config_parse;
    }
    catch (std::exception const& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_config_parse;
    }

    try
    {
        std::ofstream file;
        std::ostream* os = &out;
        if (!cfg.out_path.empty())
        {
            file.open(cfg.out_path);
            if (!file)
            {
                err << "config error: cannot write '" << cfg.out_path << "'\n";
                return exit_config_parse;
            }
            os = &file;
        }
        int const status = stage(*os);
        if (status == exit_verification_failure)
            err << "verification failed\n";
        return status;
    }
    catch (Error const& e)
    {
        err << "evaluation error: " << e.what();
        if (e.subset())
        {
            err << " [subset:";
            for (auto k : *e.subset())
                err << ' ' << k;
            err << ']';
        }
        err << '\n';
        return exit_evaluation_error;
    }
    catch (std::exception const& e)
    {
        err << "evaluation error: " << e.what() << '\n';
        return exit_evaluation_error;
    }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), out, err);
}

}  // namespace barnes::cli
