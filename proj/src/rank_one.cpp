#include "secrecy/rank_one.hpp"

#include "secrecy/worst_case.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace secrecy
{

using conic::HermAffine;
using conic::LinExpr;
using conic::Var;

namespace
{

CMatrix g_matrix(const CVector& g_bar) // G = [I, g_bar]
{
    const auto n = g_bar.size();
    CMatrix G(n, n + 1);
    G.leftCols(n) = CMatrix::Identity(n, n);
    G.col(n) = g_bar;
    return G;
}

void check_spec(const PmProblemSpec& spec)
{
    validate(spec.instance);
    if (!(spec.rate_target >= 0.0) || !std::isfinite(spec.rate_target))
        throw Error(Errc::invalid_argument, "power minimization: rate target must be >= 0");
    if (!(spec.alpha >= std::exp2(spec.rate_target) * (1.0 - 1e-9)))
        throw Error(Errc::invalid_argument, "power minimization: alpha must be >= 2^R*");
}

void append_complex(std::vector<double>& out, const CMatrix& M)
{
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
        {
            out.push_back(M(i, j).real());
            out.push_back(M(i, j).imag());
        }
}

struct Refined
{
    TransmitDesign design;
    std::vector<double> lambdas;
    DualCertificate certificate;
};

CVector read_cvec(const Eigen::VectorXd& t, int off, int n)
{
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = Complex(t(off + 2 * i), t(off + 2 * i + 1));
    return v;
}

CMatrix read_cmat(const Eigen::VectorXd& t, int off, int rows, int cols)
{
    CMatrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        M.col(j) = read_cvec(t, off + 2 * rows * j, rows);
    return M;
}

void write_cmat(Eigen::VectorXd& t, int off, const CMatrix& M)
{
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
        {
            t(off + 2 * (M.rows() * j + i)) = M(i, j).real();
            t(off + 2 * (M.rows() * j + i) + 1) = M(i, j).imag();
        }
}

/// Top-r factor F with F F^H the rank-r truncation of a PSD matrix.
CMatrix psd_factor(const CMatrix& A, int r)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(A));
    const auto n = A.rows();
    CMatrix F(n, r);
    for (int j = 0; j < r; ++j)
        F.col(j) = std::sqrt(std::max(0.0, es.eigenvalues()(n - 1 - j))) * es.eigenvectors().col(n - 1 - j);
    return F;
}

/// Ranks and active scalar constraints of the face the refinement lives on.
struct ActiveFace
{
    int rS = 0;
    std::vector<int> rB;
    std::vector<bool> lam_active;
    bool bob_active = false;
};

double max_multiplier(const DualCertificate& cert)
{
    double bnorm = 0.0;
    for (const auto& B : cert.B)
        bnorm = std::max(bnorm, std::max(0.0, Eigen::SelfAdjointEigenSolver<CMatrix>(B, Eigen::EigenvaluesOnly)
                                                  .eigenvalues()(B.rows() - 1)));
    return bnorm;
}

/// Face read off the interior-point solution. Strict complementarity pairs
/// the largest multiplier eigenvalues with the smallest slack ones.
ActiveFace identify_face(const PmProblemSpec& spec, const PmSolution& pm, double bnorm)
{
    const auto& inst = spec.instance;
    const int n = inst.nt();
    const int K = inst.num_eves();
    const auto& W0 = pm.design.W;
    const auto& S0 = pm.design.Sigma;
    const double power = W0.trace().real() + S0.trace().real();
    ActiveFace face;
    Eigen::SelfAdjointEigenSolver<CMatrix> es_s(S0, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i)
        face.rS += es_s.eigenvalues()(i) > 1e-6 * power;

    double lam_max = 0.0;
    for (double l : pm.lambdas)
        lam_max = std::max(lam_max, l);
    face.rB.assign(K, 0);
    face.lam_active.assign(K, false);
    for (int k = 0; k < K; ++k)
    {
        const auto& eve = inst.eves[k];
        const CMatrix A = build_Ak(W0, S0, spec.gamma(), pm.lambdas[k], eve.g_bar, eve.epsilon);
        Eigen::SelfAdjointEigenSolver<CMatrix> ea(A, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<CMatrix> eb(pm.certificate.B[k], Eigen::EigenvaluesOnly);
        const double anorm = std::max(ea.eigenvalues()(n), 1e-300);
        for (int i = 0; i <= n; ++i)
        {
            const double b = eb.eigenvalues()(n - i) / bnorm;
            if (b > 1e-9 && b > ea.eigenvalues()(i) / anorm)
                ++face.rB[k];
        }
        CMatrix D = CMatrix::Identity(n + 1, n + 1);
        D(n, n) = -eve.epsilon * eve.epsilon;
        const double nu = std::abs((pm.certificate.B[k] * D).trace().real());
        face.lam_active[k] = pm.lambdas[k] / (1.0 + lam_max) > nu / bnorm;
    }
    face.bob_active = pm.certificate.eta / bnorm > std::abs(bob_constraint(spec, pm.design)) / spec.alpha;
    return face;
}

/// Newton refinement of the interior-point solution of the power
/// minimization on a given face. Unknowns are factors W = w w^H,
/// Sigma = F F^H, B_k = V_k V_k^H together with lambda and eta. Y and
/// Y_Sigma come from the two stationarity equations; the remaining KKT
/// equations are
///   Y w = 0, Y_Sigma F = 0, A_k V_k = 0,
///   bob_constraint = 0 (or eta = 0 when inactive),
///   <B_k, diag(I, -eps^2)> = 0 (or lambda_k = 0 when inactive),
/// solved by Gauss-Newton with minimum-norm steps to absorb the phase and
/// rotation freedom of the factors. The refined point is returned only if it
/// is primal and dual feasible, no worse in objective, and solves the system.
std::optional<Refined> refine_on_face(const PmProblemSpec& spec, const PmSolution& pm, const ActiveFace& face,
                                      double bnorm)
{
    const auto& inst = spec.instance;
    const int n = inst.nt();
    const int K = inst.num_eves();
    const double gamma = spec.gamma();
    const double alpha = spec.alpha;
    const CMatrix hh = inst.h * inst.h.adjoint();
    const CMatrix I = CMatrix::Identity(n, n);
    const auto& W0 = pm.design.W;
    const auto& S0 = pm.design.Sigma;
    const int rS = face.rS;
    const auto& rB = face.rB;
    const auto& lam_active = face.lam_active;
    const bool bob_active = face.bob_active;
    double lam_max = 0.0;
    for (double l : pm.lambdas)
        lam_max = std::max(lam_max, l);
    std::vector<CMatrix> G(K), D(K);
    for (int k = 0; k < K; ++k)
    {
        G[k] = g_matrix(inst.eves[k].g_bar);
        D[k] = CMatrix::Identity(n + 1, n + 1);
        D[k](n, n) = -inst.eves[k].epsilon * inst.eves[k].epsilon;
    }

    const int off_w = 0;
    const int off_F = off_w + 2 * n;
    const int off_l = off_F + 2 * n * rS;
    const int off_eta = off_l + K;
    std::vector<int> off_V(K);
    int n_theta = off_eta + 1;
    for (int k = 0; k < K; ++k)
    {
        off_V[k] = n_theta;
        n_theta += 2 * (n + 1) * rB[k];
    }

    struct Point
    {
        CMatrix W, S, Y, YS;
        std::vector<CMatrix> B;
        std::vector<double> lam;
        double eta = 0.0;
    };
    auto unpack = [&](const Eigen::VectorXd& t, CVector& w, CMatrix& F, std::vector<CMatrix>& V) {
        Point p;
        w = read_cvec(t, off_w, n);
        F = read_cmat(t, off_F, n, rS);
        p.W = w * w.adjoint();
        p.S = F * F.adjoint();
        p.eta = t(off_eta);
        CMatrix GB = CMatrix::Zero(n, n);
        V.resize(K);
        for (int k = 0; k < K; ++k)
        {
            p.lam.push_back(t(off_l + k));
            V[k] = read_cmat(t, off_V[k], n + 1, rB[k]);
            p.B.push_back(V[k] * V[k].adjoint());
            GB += G[k] * p.B[k] * G[k].adjoint();
        }
        p.Y = I - p.eta * hh + GB;
        p.YS = I - p.eta * (1.0 - alpha) * hh + (1.0 - gamma) * GB;
        return p;
    };
    auto residual = [&](const Eigen::VectorXd& t) {
        CVector w;
        CMatrix F;
        std::vector<CMatrix> V;
        const Point p = unpack(t, w, F, V);
        std::vector<double> r;
        append_complex(r, p.Y * w);
        append_complex(r, p.YS * F);
        for (int k = 0; k < K; ++k)
        {
            const auto& eve = inst.eves[k];
            append_complex(r, build_Ak(p.W, p.S, gamma, p.lam[k], eve.g_bar, eve.epsilon) * V[k]);
        }
        r.push_back(bob_active ? (quad_form(p.W, inst.h) + (1.0 - alpha) * quad_form(p.S, inst.h) + 1.0 - alpha) / alpha
                               : p.eta);
        for (int k = 0; k < K; ++k)
            r.push_back(lam_active[k] ? (p.B[k] * D[k]).trace().real() : p.lam[k]);
        return Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())).eval();
    };

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_theta);
    write_cmat(theta, off_w, psd_factor(W0, 1));
    write_cmat(theta, off_F, psd_factor(S0, rS));
    for (int k = 0; k < K; ++k)
    {
        theta(off_l + k) = pm.lambdas[k];
        write_cmat(theta, off_V[k], psd_factor(pm.certificate.B[k], rB[k]));
    }
    theta(off_eta) = pm.certificate.eta;

    Eigen::VectorXd r = residual(theta);
    double rnorm = r.norm();
    const double target = 1e-13 * (1.0 + theta.norm());
    Eigen::MatrixXd J(r.size(), n_theta);
    for (int it = 0; it < 30 && rnorm > target; ++it)
    {
        for (int j = 0; j < n_theta; ++j)
        {
            const double step = 1e-7 * std::max(1.0, std::abs(theta(j)));
            Eigen::VectorXd tp = theta, tm = theta;
            tp(j) += step;
            tm(j) -= step;
            J.col(j) = (residual(tp) - residual(tm)) / (2.0 * step);
        }
        Eigen::VectorXd scale = J.colwise().norm().transpose();
        for (int j = 0; j < n_theta; ++j)
            scale(j) = scale(j) > 0.0 ? scale(j) : 1.0;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        cod.setThreshold(1e-9);
        cod.compute(J * scale.cwiseInverse().asDiagonal());
        const Eigen::VectorXd delta = -(cod.solve(r).cwiseQuotient(scale));
        double t = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 20; ++ls, t *= 0.5)
        {
            const Eigen::VectorXd cand = theta + t * delta;
            const Eigen::VectorXd rc = residual(cand);
            if (rc.allFinite() && rc.norm() < rnorm)
            {
                theta = cand;
                r = rc;
                rnorm = rc.norm();
                improved = true;
                break;
            }
        }
        if (!improved)
            break;
    }
    if (!(rnorm <= 1e-10 * (1.0 + theta.norm())))
        return std::nullopt;

    CVector w;
    CMatrix F;
    std::vector<CMatrix> V;
    const Point p = unpack(theta, w, F, V);
    auto psd_ok = [](const CMatrix& M) { return min_eigenvalue(M) >= -1e-9 * (1.0 + M.norm()); };
    if (!psd_ok(p.Y) || !psd_ok(p.YS) || p.eta < -1e-12 * (1.0 + std::abs(p.eta)))
        return std::nullopt;
    for (int k = 0; k < K; ++k)
    {
        const auto& eve = inst.eves[k];
        if (p.lam[k] < -1e-9 * (1.0 + lam_max) || !psd_ok(build_Ak(p.W, p.S, gamma, p.lam[k], eve.g_bar, eve.epsilon)))
            return std::nullopt;
        if (-(p.B[k] * D[k]).trace().real() < -1e-9 * (1.0 + bnorm))
            return std::nullopt;
    }
    Refined out;
    out.design.W = hermitian_part(p.W);
    out.design.Sigma = hermitian_part(p.S);
    if (bob_constraint(spec, out.design) < -1e-9 * alpha)
        return std::nullopt;
    const double obj = out.design.W.trace().real() + out.design.Sigma.trace().real();
    if (obj > pm.objective + 1e-7 * (1.0 + std::abs(pm.objective)))
        return std::nullopt;
    for (int k = 0; k < K; ++k)
        out.lambdas.push_back(std::max(0.0, p.lam[k]));
    out.certificate.Y = hermitian_part(p.Y);
    for (const auto& B : p.B)
        out.certificate.B.push_back(hermitian_part(B));
    out.certificate.eta = std::max(0.0, p.eta);
    return out;
}

/// refine_on_face on the identified face, then on its neighbours with one
/// rank changed, since tiny noise covariances and weak multiplier
/// eigenvalues sit close to the rank thresholds.
std::optional<Refined> refine_kkt(const PmProblemSpec& spec, const PmSolution& pm)
{
    const int n = spec.instance.nt();
    const double power = pm.design.W.trace().real() + pm.design.Sigma.trace().real();
    const double bnorm = max_multiplier(pm.certificate);
    if (!(power > 0.0) || !(bnorm > 0.0))
        return std::nullopt;
    const ActiveFace base = identify_face(spec, pm, bnorm);
    std::vector<ActiveFace> faces{base};
    for (int d : {1, -1})
    {
        ActiveFace f = base;
        f.rS += d;
        if (f.rS >= 0 && f.rS <= n)
            faces.push_back(f);
    }
    for (std::size_t k = 0; k < base.rB.size(); ++k)
        for (int d : {1, -1})
        {
            ActiveFace f = base;
            f.rB[k] += d;
            if (f.rB[k] >= 1 && f.rB[k] <= n + 1)
                faces.push_back(f);
        }
    for (const auto& f : faces)
        if (auto r = refine_on_face(spec, pm, f, bnorm))
            return r;
    return std::nullopt;
}

/// gamma = 1 allows no Eve leakage at all. With every eps_k = 0 the LMIs
/// reduce to W g_bar_k = 0 and have no interior, so the optimum is written
/// down: Sigma = 0 and W along the part h_perp of h orthogonal to the
/// eavesdroppers, scaled to meet the Bob constraint, lambda_k = lambda_max(W).
/// The multipliers eta = 1 / |h_perp|^2, B_k = 0 certify it when h is
/// itself orthogonal to every g_bar_k. Any eps_k > 0 forces W = 0, which only serves alpha = 1.
PmSolution solve_pm_no_leakage(const PmProblemSpec& spec)
{
    const auto& inst = spec.instance;
    const int n = inst.nt();
    const int K = inst.num_eves();
    PmSolution out;
    out.certificate.B.assign(K, CMatrix::Zero(n + 1, n + 1));
    out.lambdas.assign(K, 0.0);
    if (spec.alpha <= 1.0)
    {
        // Bob needs nothing either: the zero design, certified by Y = I
        out.design.W = CMatrix::Zero(n, n);
        out.design.Sigma = CMatrix::Zero(n, n);
        out.certificate.Y = CMatrix::Identity(n, n);
        out.interior_point_W = out.design.W;
        out.diagnostics.message = "closed form, zero design";
        return out;
    }
    for (const auto& e : inst.eves)
        if (e.epsilon > 0.0)
            throw Error(Errc::infeasible, "power minimization: zero leakage is unreachable over an uncertainty ball");
    CMatrix G(n, K);
    for (int k = 0; k < K; ++k)
        G.col(k) = inst.eves[k].g_bar;
    Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeFullU);
    svd.setThreshold(1e-12);
    const CMatrix U = svd.matrixU().leftCols(svd.rank());
    const CVector hp = inst.h - U * (U.adjoint() * inst.h);
    const double hp2 = hp.squaredNorm();
    if (!(hp2 > 1e-24 * inst.h.squaredNorm()))
        throw Error(Errc::infeasible, "power minimization: h lies in the span of the eavesdropper channels");

    const double t = (spec.alpha - 1.0) / hp2;
    out.design.W = hermitian_part(t * hp * hp.adjoint() / hp2);
    out.design.Sigma = CMatrix::Zero(n, n);
    out.lambdas.assign(K, t);
    out.certificate.eta = 1.0 / hp2;
    out.certificate.Y = hermitian_part(CMatrix::Identity(n, n) - out.certificate.eta * inst.h * inst.h.adjoint());
    out.objective = t;
    out.interior_point_W = out.design.W;
    out.diagnostics.message = "closed form, no leakage";
    return out;
}

} // namespace

CMatrix build_Ak(const CMatrix& W, const CMatrix& Sigma, double gamma, double lambda, const CVector& g_bar,
                 double epsilon)
{
    const auto n = g_bar.size();
    if (W.rows() != n || W.cols() != n || Sigma.rows() != n || Sigma.cols() != n)
        throw Error(Errc::dimension_mismatch, "build_Ak: W, Sigma and g_bar sizes differ");
    const CMatrix G = g_matrix(g_bar);
    CMatrix A = -G.adjoint() * (W + (1.0 - gamma) * Sigma) * G;
    A.diagonal().head(n).array() += lambda;
    A(n, n) += -lambda * epsilon * epsilon + gamma - 1.0;
    return hermitian_part(A);
}

double bob_constraint(const PmProblemSpec& spec, const TransmitDesign& design)
{
    const auto& h = spec.instance.h;
    return quad_form(design.W, h) + (1.0 - spec.alpha) * quad_form(design.Sigma, h) + 1.0 - spec.alpha;
}

PmSolution solve_pm(const PmProblemSpec& spec, const conic::Tolerances& tol, const conic::SdpBackend& backend)
{
    check_spec(spec);
    const auto& inst = spec.instance;
    const int n = inst.nt();
    const double gamma = spec.gamma();
    if (gamma <= 1.0 + 1e-12)
        return solve_pm_no_leakage(spec);

    conic::SdpProblem prob;
    const auto W = prob.add_hermitian_psd("W", n);
    const auto S = prob.add_hermitian_psd("Sigma", n);
    std::vector<Var> lam;
    for (int k = 0; k < inst.num_eves(); ++k)
        lam.push_back(prob.add_nonneg("lambda" + std::to_string(k)));

    const CMatrix hh = inst.h * inst.h.adjoint();
    LinExpr bob(1.0 - spec.alpha);
    bob += W.linear(hh) + (1.0 - spec.alpha) * S.linear(hh);
    const auto bob_id = prob.add_inequality(bob, "bob ratio >= alpha");

    const CMatrix O = CMatrix::Zero(n, n);
    std::vector<conic::ConstraintId> a_ids;
    for (int k = 0; k < inst.num_eves(); ++k)
    {
        const auto& eve = inst.eves[k];
        HermAffine A(n + 1);
        A.constant = build_Ak(O, O, gamma, 0.0, eve.g_bar, eve.epsilon);
        for (int p = 0; p < conic::hermitian_dim(n); ++p)
        {
            const CMatrix E = conic::hermitian_basis(n, p);
            A.add(Var{W.ids[p]}, build_Ak(E, O, gamma, 0.0, eve.g_bar, eve.epsilon) - A.constant);
            A.add(Var{S.ids[p]}, build_Ak(O, E, gamma, 0.0, eve.g_bar, eve.epsilon) - A.constant);
        }
        A.add(lam[k], build_Ak(O, O, gamma, 1.0, eve.g_bar, eve.epsilon) - A.constant);
        a_ids.push_back(prob.add_lmi(A, "A" + std::to_string(k)));
    }

    const CMatrix I = CMatrix::Identity(n, n);
    prob.set_objective(conic::Sense::minimize, W.linear(I) + S.linear(I));

    conic::SdpSolution sol = backend.solve(prob, tol);
    if (sol.status == conic::SolveStatus::numerical_failure)
    {
        // same escalation as phi; the KKT refinement below restores accuracy
        conic::Tolerances loose = tol;
        loose.feasibility = std::max(tol.feasibility, 1e-6);
        loose.gap = std::max(tol.gap, 1e-6);
        loose.max_iterations = std::max(tol.max_iterations, 400);
        sol = backend.solve(prob, loose);
    }
    if (sol.status == conic::SolveStatus::infeasible)
        throw Error(Errc::infeasible, "power minimization: rate target unreachable at the fixed alpha");
    conic::require_optimal(sol, "power minimization");

    PmSolution out;
    out.design.W = project_psd(sol.value(W));
    out.design.Sigma = project_psd(sol.value(S));
    for (const Var v : lam)
        out.lambdas.push_back(std::max(0.0, sol.value(v)));
    out.certificate.Y = sol.hermitian_dual(W.psd);
    for (const auto id : a_ids)
        out.certificate.B.push_back(sol.hermitian_dual(id));
    out.certificate.eta = sol.scalar_dual(bob_id);
    out.objective = sol.objective;
    out.diagnostics = sol.diagnostics;
    out.interior_point_W = out.design.W;

    if (auto refined = refine_kkt(spec, out))
    {
        out.design = std::move(refined->design);
        out.lambdas = std::move(refined->lambdas);
        out.certificate = std::move(refined->certificate);
        out.objective = out.design.W.trace().real() + out.design.Sigma.trace().real();
        out.refined = true;
    }
    return out;
}

double stationarity_residual(const PmProblemSpec& spec, const DualCertificate& cert)
{
    const auto& inst = spec.instance;
    const int n = inst.nt();
    if (static_cast<int>(cert.B.size()) != inst.num_eves())
        throw Error(Errc::dimension_mismatch, "stationarity_residual: one B_k per eavesdropper expected");
    CMatrix R = CMatrix::Identity(n, n) - cert.eta * inst.h * inst.h.adjoint() - cert.Y;
    for (int k = 0; k < inst.num_eves(); ++k)
    {
        const CMatrix G = g_matrix(inst.eves[k].g_bar);
        R += G * cert.B[k] * G.adjoint();
    }
    return R.norm();
}

double complementarity_residual(const CMatrix& W, const DualCertificate& cert)
{
    const double tr = W.trace().real();
    if (!(tr > 0.0))
        return 0.0;
    return (W * cert.Y).norm() / tr;
}

RankOneResult extract_rank_one(const PmProblemSpec& spec, const PmSolution& solution)
{
    const CMatrix& W = solution.design.W;
    const auto n = W.rows();
    RankOneResult out;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(W));
    const double l1 = es.eigenvalues()(n - 1);
    if (!(l1 > 0.0) || (spec.rate_target == 0.0 && W.norm() <= 1e-12))
    {
        out.beam = CVector::Zero(n);
        return out;
    }
    // the rank test reads the interior-point W; the refined one is rank one by construction
    const CMatrix& W_ip = solution.interior_point_W.size() == W.size() ? solution.interior_point_W : W;
    Eigen::SelfAdjointEigenSolver<CMatrix> es_ip(hermitian_part(W_ip), Eigen::EigenvaluesOnly);
    const double l1_ip = es_ip.eigenvalues()(n - 1);
    const double l2_ip = n > 1 ? std::max(0.0, es_ip.eigenvalues()(n - 2)) : 0.0;
    out.lambda_ratio = l1_ip > 0.0 ? l2_ip / l1_ip : 0.0;

    CVector w = std::sqrt(l1) * es.eigenvectors().col(n - 1);
    const Complex hw = spec.instance.h.dot(w); // h^H w
    if (std::abs(hw) > 0.0)
        w *= std::conj(hw) / std::abs(hw);
    out.beam = w;

    if (out.lambda_ratio > 1e-6)
    {
        out.projected = true;
        TransmitDesign d{w * w.adjoint(), solution.design.Sigma, w};
        const double gamma = spec.gamma();
        double worst = std::min(0.0, bob_constraint(spec, d));
        for (int k = 0; k < spec.instance.num_eves(); ++k)
        {
            const auto& eve = spec.instance.eves[k];
            const double lam = k < static_cast<int>(solution.lambdas.size()) ? solution.lambdas[k] : 0.0;
            worst = std::min(worst, min_eigenvalue(build_Ak(d.W, d.Sigma, gamma, lam, eve.g_bar, eve.epsilon)));
        }
        if (worst < -1e-6)
        {
            std::ostringstream msg;
            msg << "rank-one extraction: lambda2/lambda1 = " << out.lambda_ratio
                << ", projected design violates the constraints by " << -worst;
            throw Error(Errc::rank_extraction_failed, msg.str());
        }
    }
    return out;
}

SecrecyResult full_pipeline(const ProblemInstance& instance, const SearchOptions& options)
{
    SecrecyResult res = solve_srm(instance, options);
    const auto n = instance.nt();
    double r_star = res.rate_worst_case;
    for (const auto& rep : res.per_eve)
        r_star = std::min(r_star, rep.secrecy_term);
    r_star = std::max(0.0, r_star);

    if (r_star < 1e-8)
    {
        // no positive secrecy rate: the zero design is optimal
        res.design = {CMatrix::Zero(n, n), CMatrix::Zero(n, n), CVector::Zero(n)};
        res.rate_worst_case = 0.0;
        res.per_eve = evaluate_design(instance, res.design).reports;
        res.lambda_ratio = 0.0;
        return res;
    }

    PmProblemSpec spec;
    spec.instance = instance;
    spec.rate_target = r_star;
    spec.alpha = std::max(bob_ratio(instance.h, res.design.W, res.design.Sigma), std::exp2(r_star));
    const conic::SdpBackend& backend = options.backend ? *options.backend : conic::default_backend();
    const PmSolution pm = solve_pm(spec, options.tolerances, backend);
    const RankOneResult r1 = extract_rank_one(spec, pm);

    TransmitDesign final_design{r1.beam * r1.beam.adjoint(), pm.design.Sigma, r1.beam};
    const DesignEvaluation ev = evaluate_design(instance, final_design);
    const double power = final_design.W.trace().real() + final_design.Sigma.trace().real();
    if (ev.rate < r_star - 1e-5 || power > instance.power * (1.0 + 1e-7))
    {
        std::ostringstream msg;
        msg << "full_pipeline: extracted design reaches rate " << ev.rate << " (target " << r_star << ") at power "
            << power << " (budget " << instance.power << ")";
        throw Error(Errc::numerical_failure, msg.str());
    }
    res.design = std::move(final_design);
    res.rate_worst_case = ev.rate;
    res.per_eve = ev.reports;
    res.lambda_ratio = r1.lambda_ratio;
    return res;
}

} // namespace secrecy
