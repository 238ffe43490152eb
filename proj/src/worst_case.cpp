#include "secrecy/worst_case.hpp"

#include "secrecy/conic/sdp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace secrecy
{

TrsResult solve_trs(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, double radius)
{
    const auto n = H.rows();
    if (H.cols() != n || g.size() != n)
        throw Error(Errc::dimension_mismatch, "solve_trs: H and g sizes differ");
    if (!(radius >= 0.0))
        throw Error(Errc::invalid_argument, "solve_trs: radius must be >= 0");

    TrsResult res;
    res.x = Eigen::VectorXd::Zero(n);
    if (radius == 0.0 || n == 0)
        return res;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::VectorXd gam = V.transpose() * g;
    const double gnorm = gam.norm();
    const double lmin = lam(0);
    const double scale = std::max({lam.cwiseAbs().maxCoeff(), gnorm / radius, 1e-300});

    auto value_of = [&](const Eigen::VectorXd& z) { // z in the eigenbasis
        return 0.5 * z.dot(lam.cwiseProduct(z)) + gam.dot(z);
    };
    auto finish = [&](const Eigen::VectorXd& z, double sigma) {
        res.x = V * z;
        res.value = value_of(z);
        res.multiplier = sigma;
        return res;
    };

    // interior stationary point
    if (lmin > 0.0)
    {
        const Eigen::VectorXd z = -gam.cwiseQuotient(lam);
        if (z.norm() <= radius)
            return finish(z, 0.0);
    }
    res.on_boundary = true;

    const double sigma_low = std::max(0.0, -lmin);
    const double deg_tol = 1e-12 * scale;
    double gam_left2 = 0.0;
    for (Eigen::Index i = 0; i < n && lam(i) - lmin <= deg_tol; ++i)
        gam_left2 += gam(i) * gam(i);

    // Components off the leftmost eigenspace at sigma_low.
    auto rest_at = [&](double sigma) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double d = lam(i) + sigma;
            if (lam(i) - lmin > deg_tol)
                z(i) = -gam(i) / d;
        }
        return z;
    };

    if (lmin <= 0.0)
    {
        const Eigen::VectorXd z = rest_at(sigma_low);
        const double rest2 = z.squaredNorm();
        // Root offset from the pole, sigma - sigma_low ~ |gam_left| / sqrt(radius^2 - |z|^2).
        const bool pole_negligible =
            rest2 < radius * radius &&
            std::sqrt(gam_left2) <= 1e-13 * scale * std::sqrt(radius * radius - rest2);
        if (pole_negligible)
        {
            res.hard_case = true;
            Eigen::VectorXd zh = z;
            const double tau = std::sqrt(std::max(0.0, radius * radius - rest2));
            const double sgn = gam(0) > 0.0 ? -1.0 : 1.0;
            zh(0) += sgn * tau;
            return finish(zh, sigma_low);
        }
    }

    // Safeguarded Newton on psi(sigma) = 1/radius - 1/||z(sigma)||.
    auto znorm2 = [&](double sigma, double& deriv) {
        double q = 0.0, dq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double d = lam(i) + sigma;
            const double t = gam(i) * gam(i) / (d * d);
            q += t;
            dq -= 2.0 * t / d;
        }
        deriv = dq;
        return q;
    };

    // ||z(sigma)|| <= |g| / (lmin + sigma) <= radius at the upper end
    double lo = sigma_low;
    double hi = sigma_low + gnorm / radius;
    if (!(hi > lo))
        hi = lo + std::max(scale, 1.0) * 1e-12;
    double sigma = hi;
    const int max_iter = 300;
    for (int it = 0; it < max_iter; ++it)
    {
        res.iterations = it + 1;
        double dq = 0.0;
        const double q = znorm2(sigma, dq);
        const double norm = std::sqrt(q);
        if (std::abs(norm - radius) <= 1e-14 * radius || hi - lo <= 4e-16 * std::max(1.0, std::abs(hi)))
        {
            Eigen::VectorXd z(n);
            for (Eigen::Index i = 0; i < n; ++i)
                z(i) = -gam(i) / (lam(i) + sigma);
            // pull back onto the ball if roundoff overshoots
            const double zn = z.norm();
            if (zn > radius)
                z *= radius / zn;
            return finish(z, sigma);
        }
        if (norm > radius)
            lo = sigma;
        else
            hi = sigma;
        const double psi = 1.0 / radius - 1.0 / norm;
        const double dpsi = 0.5 * dq / (q * norm);
        double next = sigma - psi / dpsi;
        if (!(next > lo && next < hi) || !std::isfinite(next))
        {
            const double width = hi - lo;
            next = (lo > 0.0 && hi / lo > 1e3) ? std::sqrt(lo * hi) : lo + 0.5 * width;
        }
        sigma = next;
    }
    std::ostringstream msg;
    msg << "solve_trs: secular equation did not converge, bracket [" << lo << ", " << hi << "], lambda range ["
        << lmin << ", " << lam(n - 1) << "], |g| " << gnorm << ", radius " << radius;
    throw Error(Errc::numerical_failure, msg.str());
}

double eve_ratio(const CVector& g, const CMatrix& W, const CMatrix& Sigma)
{
    if (g.size() != W.rows() || g.size() != Sigma.rows())
        throw Error(Errc::dimension_mismatch, "eve_ratio: dimension mismatch");
    return 1.0 + quad_form(W, g) / (1.0 + quad_form(Sigma, g));
}

double bob_ratio(const CVector& h, const CMatrix& W, const CMatrix& Sigma)
{
    return eve_ratio(h, W, Sigma);
}

namespace
{

struct LevelProbe
{
    double value; // max over the ball of g^H A g - (t - 1)
    CVector g;
};

LevelProbe probe_level(double t, const CVector& g_bar, double epsilon, const CMatrix& W, const CMatrix& Sigma)
{
    const auto n = g_bar.size();
    const CMatrix A = hermitian_part(W - (t - 1.0) * Sigma);
    const Eigen::MatrixXd Ar = conic::embed_complex(A);
    const CVector v = A * g_bar;
    Eigen::VectorXd vr(2 * n);
    vr << v.real(), v.imag();
    // maximize d'Ar d + 2 vr'd  <=>  minimize 0.5 d'(-2Ar)d + (-2vr)'d
    const TrsResult trs = solve_trs(-2.0 * Ar, -2.0 * vr, epsilon);
    LevelProbe p;
    p.g = g_bar;
    p.g.real() += trs.x.head(n);
    p.g.imag() += trs.x.tail(n);
    p.value = -trs.value + quad_form(A, g_bar) - (t - 1.0);
    return p;
}

} // namespace

WorstCaseRatio worst_ratio(const CVector& g_bar, double epsilon, const CMatrix& W, const CMatrix& Sigma)
{
    if (g_bar.size() != W.rows() || W.rows() != W.cols() || Sigma.rows() != W.rows() || Sigma.cols() != W.cols())
        throw Error(Errc::dimension_mismatch, "worst_ratio: dimension mismatch");
    if (!(epsilon >= 0.0))
        throw Error(Errc::invalid_argument, "worst_ratio: epsilon must be >= 0");

    WorstCaseRatio out;
    out.worst_g = g_bar;
    double t_lo = eve_ratio(g_bar, W, Sigma);
    if (epsilon == 0.0)
    {
        out.ratio = t_lo;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(W), Eigen::EigenvaluesOnly);
    const double lmax = std::max(0.0, es.eigenvalues()(W.rows() - 1));
    const double reach = g_bar.norm() + epsilon;
    double t_hi = std::max(t_lo, 1.0 + lmax * reach * reach);

    auto consider = [&](const CVector& g) {
        const double r = eve_ratio(g, W, Sigma);
        if (r > t_lo)
        {
            t_lo = r;
            out.worst_g = g;
        }
    };

    const double rel_tol = 1e-9;
    for (int iter = 0; iter < 200 && t_hi - t_lo > rel_tol * t_hi; ++iter)
    {
        const double width = t_hi - t_lo;
        // Dinkelbach step from the incumbent; value >= 0 there up to roundoff.
        const double t = t_lo;
        const LevelProbe p = probe_level(t, g_bar, epsilon, W, Sigma);
        ++out.trs_solves;
        t_hi = std::max(t_lo, std::min(t_hi, t + std::max(p.value, 0.0)));
        consider(p.g);
        if (t_hi - t_lo > 0.5 * width)
        {
            const double mid = 0.5 * (t_lo + t_hi);
            const LevelProbe q = probe_level(mid, g_bar, epsilon, W, Sigma);
            ++out.trs_solves;
            if (q.value >= 0.0)
                consider(q.g);
            else
                t_hi = mid;
        }
    }
    // polish: Dinkelbach converges superlinearly once inside the bracket
    for (int iter = 0; iter < 20; ++iter)
    {
        const double before = t_lo;
        const LevelProbe p = probe_level(t_lo, g_bar, epsilon, W, Sigma);
        ++out.trs_solves;
        consider(p.g);
        if (t_lo <= before * (1.0 + 1e-15))
            break;
    }
    out.ratio = eve_ratio(out.worst_g, W, Sigma);
    return out;
}

DesignEvaluation evaluate_design(const ProblemInstance& instance, const TransmitDesign& design)
{
    validate(instance);
    const auto n = instance.nt();
    if (design.W.rows() != n || design.Sigma.rows() != n)
        throw Error(Errc::dimension_mismatch, "evaluate_design: design size does not match the instance");
    const double bob_term = std::log2(bob_ratio(instance.h, design.W, design.Sigma));
    DesignEvaluation ev;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < instance.num_eves(); ++k)
    {
        const auto& eve = instance.eves[k];
        const WorstCaseRatio wc = worst_ratio(eve.g_bar, eve.epsilon, design.W, design.Sigma);
        WorstCaseEveReport rep;
        rep.k = k;
        rep.worst_ratio = wc.ratio;
        rep.worst_g = wc.worst_g;
        rep.bob_term = bob_term;
        rep.secrecy_term = bob_term - std::log2(wc.ratio);
        worst = std::min(worst, rep.secrecy_term);
        ev.reports.push_back(std::move(rep));
    }
    ev.rate = std::max(0.0, worst);
    return ev;
}

} // namespace secrecy
