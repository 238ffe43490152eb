#include "secrecy/robust_srm.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace secrecy
{

using conic::HermAffine;
using conic::LinExpr;
using conic::Sense;
using conic::Var;

CMatrix build_Tk(const CMatrix& Z, const CMatrix& Q, double beta, double xi, double mu, const CVector& g_bar,
                 double epsilon)
{
    const auto n = g_bar.size();
    if (Z.rows() != n || Z.cols() != n || Q.rows() != n || Q.cols() != n)
        throw Error(Errc::dimension_mismatch, "build_Tk: Z, Q and g_bar sizes differ");
    const CMatrix M = Z - (beta - 1.0) * Q;
    const CVector Mg = M * g_bar;
    CMatrix T(n + 1, n + 1);
    T.topLeftCorner(n, n) = mu * CMatrix::Identity(n, n) - M;
    T.topRightCorner(n, 1) = -Mg;
    T.bottomLeftCorner(1, n) = -Mg.adjoint();
    T(n, n) = -epsilon * epsilon * mu - g_bar.dot(Mg).real() + (beta - 1.0) * xi;
    return hermitian_part(T);
}

double beta_upper_bound(const ProblemInstance& instance)
{
    return 1.0 + instance.power * instance.h.squaredNorm();
}

namespace
{

struct PhiModel
{
    conic::SdpProblem problem;
    conic::HermitianVar Z, Q;
    Var xi;
    std::vector<Var> mu;
};

PhiModel build_model(double beta, const ProblemInstance& instance)
{
    const int n = instance.nt();
    const int K = instance.num_eves();
    PhiModel m;
    auto& prob = m.problem;
    m.Z = prob.add_hermitian_psd("Z", n);
    m.Q = prob.add_hermitian_psd("Q", n);
    m.xi = prob.add_nonneg("xi");
    for (int k = 0; k < K; ++k)
        m.mu.push_back(prob.add_nonneg("mu" + std::to_string(k)));

    const CMatrix hh = instance.h * instance.h.adjoint();
    const CMatrix I = CMatrix::Identity(n, n);
    const CMatrix O = CMatrix::Zero(n, n);

    LinExpr norm_eq(-1.0);
    norm_eq.add(m.xi, beta);
    norm_eq += beta * m.Q.linear(hh);
    prob.add_equality(norm_eq, "beta (xi + h^H Q h) = 1");

    for (int k = 0; k < K; ++k)
    {
        const auto& eve = instance.eves[k];
        HermAffine T(n + 1);
        // T_k is linear in (Z, Q, xi, mu_k); read off each coefficient
        for (int p = 0; p < conic::hermitian_dim(n); ++p)
        {
            const CMatrix E = conic::hermitian_basis(n, p);
            T.add(Var{m.Z.ids[p]}, build_Tk(E, O, beta, 0.0, 0.0, eve.g_bar, eve.epsilon));
            T.add(Var{m.Q.ids[p]}, build_Tk(O, E, beta, 0.0, 0.0, eve.g_bar, eve.epsilon));
        }
        T.add(m.xi, build_Tk(O, O, beta, 1.0, 0.0, eve.g_bar, eve.epsilon));
        T.add(m.mu[k], build_Tk(O, O, beta, 0.0, 1.0, eve.g_bar, eve.epsilon));
        prob.add_lmi(T, "T" + std::to_string(k));
    }

    LinExpr budget;
    budget.add(m.xi, instance.power);
    budget += -1.0 * (m.Z.linear(I) + m.Q.linear(I));
    prob.add_inequality(budget, "Tr(Z + Q) <= xi P");

    LinExpr obj;
    obj.add(m.xi, 1.0);
    obj += m.Z.linear(hh) + m.Q.linear(hh);
    prob.set_objective(Sense::maximize, obj);
    return m;
}

void check_beta(double beta, const ProblemInstance& instance)
{
    const double hi = beta_upper_bound(instance);
    if (!(beta >= 1.0 - 1e-12) || !(beta <= hi * (1.0 + 1e-12)))
    {
        std::ostringstream msg;
        msg << "phi: beta " << beta << " outside [1, " << hi << "]";
        throw Error(Errc::invalid_argument, msg.str());
    }
}

/// At beta = 1 the corner entry of T_k is -eps^2 mu - g^H Z g, so an
/// eavesdropper with eps > 0 forces mu = 0 and then Z = 0, and one with
/// eps = 0 forces Z g_bar = 0. The optimum is Q = 0, xi = 1 and all power in
/// Z along the part of h orthogonal to the exactly known eavesdroppers.
/// The LMIs have no interior there, so the point is written down directly.
PhiResult phi_at_one(const ProblemInstance& instance)
{
    const int n = instance.nt();
    const int K = instance.num_eves();
    PhiResult out;
    out.point.Z = CMatrix::Zero(n, n);
    out.point.Q = CMatrix::Zero(n, n);
    out.point.xi = 1.0;
    out.point.mu.assign(K, 0.0);
    out.value = 1.0;

    const bool any_ball = std::any_of(instance.eves.begin(), instance.eves.end(),
                                      [](const EveChannel& e) { return e.epsilon > 0.0; });
    if (any_ball)
        return out;
    CMatrix G(n, K);
    for (int k = 0; k < K; ++k)
        G.col(k) = instance.eves[k].g_bar;
    Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeFullU);
    svd.setThreshold(1e-12);
    const auto r = svd.rank();
    const CMatrix U = svd.matrixU().leftCols(r);
    const CVector hp = instance.h - U * (U.adjoint() * instance.h);
    const double hp2 = hp.squaredNorm();
    if (!(hp2 > 1e-24 * instance.h.squaredNorm()))
        return out;
    out.point.Z = hermitian_part(instance.power * hp * hp.adjoint() / hp2);
    out.point.mu.assign(K, instance.power);
    out.value = 1.0 + instance.power * hp2;
    return out;
}

} // namespace

conic::SdpProblem build_phi_problem(double beta, const ProblemInstance& instance)
{
    validate(instance);
    check_beta(beta, instance);
    return build_model(beta, instance).problem;
}

PhiResult phi(double beta, const ProblemInstance& instance, const conic::Tolerances& tol,
              const conic::SdpBackend& backend)
{
    validate(instance);
    check_beta(beta, instance);
    if (beta <= 1.0)
        return phi_at_one(instance);
    const PhiModel m = build_model(beta, instance);

    PhiResult out;
    conic::SdpSolution sol = backend.solve(m.problem, tol);
    if (!sol.optimal())
    {
        conic::Tolerances loose = tol;
        loose.feasibility = std::max(tol.feasibility, 1e-6);
        loose.gap = std::max(tol.gap, 1e-6);
        loose.max_iterations = std::max(tol.max_iterations, 400);
        sol = backend.solve(m.problem, loose);
        out.retried = true;
    }
    std::ostringstream ctx;
    ctx.precision(17);
    ctx << "phi(beta = " << beta << ")";
    conic::require_optimal(sol, ctx.str());

    out.value = sol.objective;
    out.point.Z = project_psd(sol.value(m.Z));
    out.point.Q = project_psd(sol.value(m.Q));
    out.point.xi = std::max(0.0, sol.value(m.xi));
    for (const Var v : m.mu)
        out.point.mu.push_back(std::max(0.0, sol.value(v)));
    out.diagnostics = sol.diagnostics;
    return out;
}

TransmitDesign recover_design(const CharnesCooperPoint& point, double power)
{
    const auto n = point.Z.rows();
    TransmitDesign d;
    if (!(point.xi > 0.0))
    {
        d.W = CMatrix::Zero(n, n);
        d.Sigma = CMatrix::Zero(n, n);
        return d;
    }
    d.W = project_psd(point.Z / point.xi);
    d.Sigma = project_psd(point.Q / point.xi);
    const double tr = d.W.trace().real() + d.Sigma.trace().real();
    if (tr > power)
    {
        d.W *= power / tr;
        d.Sigma *= power / tr;
    }
    return d;
}

namespace
{

struct Evaluated
{
    LineSearchSample sample;
    std::optional<CharnesCooperPoint> point;
};

Evaluated evaluate(double beta, SampleStage stage, const ProblemInstance& instance, const SearchOptions& opt)
{
    const conic::SdpBackend& backend = opt.backend ? *opt.backend : conic::default_backend();
    Evaluated e;
    e.sample.beta = beta;
    e.sample.stage = stage;
    try
    {
        PhiResult r = phi(beta, instance, opt.tolerances, backend);
        e.sample.phi = r.value;
        e.sample.ok = true;
        e.point = std::move(r.point);
    }
    catch (const conic::SolverFailure& ex)
    {
        e.sample.message = ex.what();
    }
    return e;
}

void emit_warning(const SearchOptions& opt, const std::string& msg)
{
    if (opt.warn)
        opt.warn(msg);
    else
        std::cerr << "warning: " << msg << '\n';
}

std::vector<Evaluated> evaluate_grid(const std::vector<double>& betas, const ProblemInstance& instance,
                                     const SearchOptions& opt)
{
    std::vector<Evaluated> out(betas.size());
    const int workers = std::clamp(opt.threads, 1, static_cast<int>(betas.size()));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < betas.size(); ++i)
            out[i] = evaluate(betas[i], SampleStage::grid, instance, opt);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < betas.size(); i = next++)
                out[i] = evaluate(betas[i], SampleStage::grid, instance, opt);
        });
    for (auto& t : pool)
        t.join();
    return out;
}

/// true when a beats b: larger phi beyond a 1e-9 relative margin, else smaller beta.
bool better(const LineSearchSample& a, const LineSearchSample& b)
{
    if (!a.ok)
        return false;
    if (!b.ok)
        return true;
    const double margin = 1e-9 * std::max(std::abs(a.phi), std::abs(b.phi));
    if (a.phi > b.phi + margin)
        return true;
    if (b.phi > a.phi + margin)
        return false;
    return a.beta < b.beta;
}

} // namespace

SecrecyResult solve_srm(const ProblemInstance& instance, const SearchOptions& options)
{
    validate(instance);
    const int n_grid = options.exhaustive ? *options.exhaustive : options.grid_points;
    if (n_grid < 2)
        throw Error(Errc::invalid_argument, "solve_srm: the grid needs at least 2 points");

    const double lo = 1.0;
    const double hi = beta_upper_bound(instance);
    std::vector<double> betas(n_grid);
    for (int i = 0; i < n_grid; ++i)
        betas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    betas.back() = hi;

    std::vector<Evaluated> evals = evaluate_grid(betas, instance, options);
    if (!evals.front().sample.ok)
        throw conic::SolverFailure("solve_srm: mandatory point beta = 1 failed: " + evals.front().sample.message,
                                   {});
    int n_ok = 0;
    for (const auto& e : evals)
    {
        if (e.sample.ok)
            ++n_ok;
        else
            emit_warning(options, "skipping grid point: " + e.sample.message);
    }
    if (5 * n_ok < 4 * n_grid)
    {
        std::ostringstream msg;
        msg << "solve_srm: only " << n_ok << " of " << n_grid << " grid points solved";
        throw conic::SolverFailure(msg.str(), {});
    }

    SecrecyResult res;
    std::size_t best = 0;
    for (std::size_t i = 1; i < evals.size(); ++i)
        if (better(evals[i].sample, evals[best].sample))
            best = i;

    if (!options.exhaustive && options.golden_iterations > 0)
    {
        double a = betas[best == 0 ? 0 : best - 1];
        double b = betas[std::min(best + 1, betas.size() - 1)];
        const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
        auto probe = [&](double beta) {
            evals.push_back(evaluate(beta, SampleStage::golden, instance, options));
            return evals.size() - 1;
        };
        auto phi_of = [&](std::size_t i) {
            return evals[i].sample.ok ? evals[i].sample.phi : -std::numeric_limits<double>::infinity();
        };
        std::size_t ic = probe(b - inv_phi * (b - a));
        std::size_t id = probe(a + inv_phi * (b - a));
        res.trace.brackets.emplace_back(a, b);
        for (int it = 2; it < options.golden_iterations; ++it)
        {
            // keep the lower sub-bracket on ties
            if (phi_of(ic) >= phi_of(id))
            {
                b = evals[id].sample.beta;
                id = ic;
                ic = probe(b - inv_phi * (b - a));
            }
            else
            {
                a = evals[ic].sample.beta;
                ic = id;
                id = probe(a + inv_phi * (b - a));
            }
            res.trace.brackets.emplace_back(a, b);
        }
        for (std::size_t i = 0; i < evals.size(); ++i)
            if (better(evals[i].sample, evals[best].sample))
                best = i;
    }

    for (const auto& e : evals)
        res.trace.samples.push_back(e.sample);
    const Evaluated& star = evals[best];
    res.trace.beta_star = star.sample.beta;
    res.trace.phi_star = star.sample.phi;
    res.beta_star = star.sample.beta;
    res.design = recover_design(*star.point, instance.power);
    res.rate_worst_case = std::max(0.0, std::log2(star.sample.phi));
    res.per_eve = evaluate_design(instance, res.design).reports;
    return res;
}

} // namespace secrecy
