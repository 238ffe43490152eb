// Infeasible primal-dual path-following method for
//
//   (D)  maximize b'y  s.t.  S = C - sum_j y_j A_j  >= 0   (block diagonal)
//   (P)  minimize <C,X> s.t. <A_j, X> = b_j,  X >= 0
//
// User problems are lowered to (D): scalar variables become y after linear
// equalities are eliminated by substitution, LMIs become dense blocks and
// scalar inequalities share one diagonal (LP) block.

#include "secrecy/conic/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace secrecy::conic
{
namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

struct DenseBlock
{
    int n = 0;
    int constraint = -1;
    Eigen::MatrixXd C;
    std::vector<int> vars;
    std::vector<Eigen::MatrixXd> A;
};

struct StandardForm
{
    int m = 0;
    Eigen::VectorXd b;
    std::vector<DenseBlock> blocks;
    Eigen::VectorXd lp_c;
    Eigen::MatrixXd lp_A; // m x n_lp
    std::vector<int> lp_constraint;

    // x = x0 + T y
    Eigen::VectorXd x0;
    Eigen::MatrixXd T;
    double objective_constant = 0.0; // maximize-form constant after substitution
    bool inconsistent_equalities = false;
};

Eigen::VectorXd dense_row(const LinExpr& e, int n)
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (const auto& [id, c] : e.terms)
        r(id) += c;
    return r;
}

StandardForm lower_problem(const SdpProblem& problem, Eigen::VectorXd& c_max)
{
    const int n = problem.num_scalars();
    const double sign = problem.sense() == Sense::maximize ? 1.0 : -1.0;
    c_max = sign * dense_row(problem.objective(), n);

    StandardForm sf;

    std::vector<int> eq_rows;
    for (std::size_t k = 0; k < problem.constraints().size(); ++k)
        if (problem.constraints()[k].kind == ConstraintKind::equality)
            eq_rows.push_back(static_cast<int>(k));

    sf.x0 = Eigen::VectorXd::Zero(n);
    if (eq_rows.empty())
    {
        sf.T = Eigen::MatrixXd::Identity(n, n);
    }
    else
    {
        const int ne = static_cast<int>(eq_rows.size());
        Eigen::MatrixXd E(ne, n);
        Eigen::VectorXd f(ne);
        for (int r = 0; r < ne; ++r)
        {
            const auto& lin = problem.constraints()[eq_rows[r]].linear;
            E.row(r) = dense_row(lin, n).transpose();
            f(r) = -lin.constant;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
        lu.setThreshold(1e-12);
        const int rank = static_cast<int>(lu.rank());
        std::vector<int> row_idx(rank), basic(rank);
        std::vector<char> is_basic(n, 0);
        for (int i = 0; i < rank; ++i)
        {
            row_idx[i] = lu.permutationP().indices()(i);
            basic[i] = lu.permutationQ().indices()(i);
            is_basic[basic[i]] = 1;
        }
        std::vector<int> nonbasic;
        for (int i = 0; i < n; ++i)
            if (!is_basic[i])
                nonbasic.push_back(i);

        Eigen::MatrixXd EB(rank, rank), EN(rank, nonbasic.size());
        Eigen::VectorXd fB(rank);
        for (int r = 0; r < rank; ++r)
        {
            for (int c = 0; c < rank; ++c)
                EB(r, c) = E(row_idx[r], basic[c]);
            for (std::size_t c = 0; c < nonbasic.size(); ++c)
                EN(r, c) = E(row_idx[r], nonbasic[c]);
            fB(r) = f(row_idx[r]);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> luB(EB);
        const Eigen::VectorXd xB = luB.solve(fB);
        const Eigen::MatrixXd TB = -luB.solve(EN);

        const int m = static_cast<int>(nonbasic.size());
        sf.T = Eigen::MatrixXd::Zero(n, m);
        for (int j = 0; j < m; ++j)
            sf.T(nonbasic[j], j) = 1.0;
        for (int r = 0; r < rank; ++r)
        {
            sf.x0(basic[r]) = xB(r);
            sf.T.row(basic[r]) = TB.row(r);
        }
        const double resid = (E * sf.x0 - f).norm();
        sf.inconsistent_equalities = !(resid <= 1e-9 * (1.0 + f.norm()));
    }
    sf.m = static_cast<int>(sf.T.cols());
    sf.b = sf.T.transpose() * c_max;
    sf.objective_constant = sign * problem.objective().constant + c_max.dot(sf.x0);

    std::vector<Eigen::VectorXd> lp_rows;
    std::vector<double> lp_consts;
    for (std::size_t k = 0; k < problem.constraints().size(); ++k)
    {
        const auto& con = problem.constraints()[k];
        if (con.kind == ConstraintKind::inequality)
        {
            const Eigen::VectorXd a = dense_row(con.linear, n);
            lp_consts.push_back(con.linear.constant + a.dot(sf.x0));
            lp_rows.push_back(sf.T.transpose() * a);
            sf.lp_constraint.push_back(static_cast<int>(k));
        }
        else if (con.kind == ConstraintKind::lmi)
        {
            DenseBlock blk;
            blk.n = con.matrix.size();
            blk.constraint = static_cast<int>(k);
            Eigen::MatrixXd F0 = con.matrix.constant;
            std::vector<Eigen::MatrixXd> acc(sf.m);
            std::vector<char> used(sf.m, 0);
            for (const auto& [id, F] : con.matrix.terms)
            {
                if (sf.x0(id) != 0.0)
                    F0 += sf.x0(id) * F;
                for (int j = 0; j < sf.m; ++j)
                {
                    const double t = sf.T(id, j);
                    if (t == 0.0)
                        continue;
                    if (!used[j])
                    {
                        acc[j] = t * F;
                        used[j] = 1;
                    }
                    else
                        acc[j] += t * F;
                }
            }
            blk.C = 0.5 * (F0 + F0.transpose());
            for (int j = 0; j < sf.m; ++j)
            {
                if (!used[j] || acc[j].cwiseAbs().maxCoeff() == 0.0)
                    continue;
                blk.vars.push_back(j);
                blk.A.push_back(-0.5 * (acc[j] + acc[j].transpose()));
            }
            sf.blocks.push_back(std::move(blk));
        }
    }
    const int nlp = static_cast<int>(lp_rows.size());
    sf.lp_c.resize(nlp);
    sf.lp_A.resize(sf.m, nlp);
    for (int r = 0; r < nlp; ++r)
    {
        sf.lp_c(r) = lp_consts[r];
        sf.lp_A.col(r) = -lp_rows[r];
    }
    return sf;
}

struct Iterate
{
    std::vector<Eigen::MatrixXd> X, S;
    Eigen::VectorXd x_lp, s_lp, y;
};

struct Direction
{
    std::vector<Eigen::MatrixXd> dX, dS;
    Eigen::VectorXd dx_lp, ds_lp, dy;
};

class Ipm
{
public:
    Ipm(const StandardForm& sf, const Tolerances& tol) : sf_(sf), tol_(tol) {}

    SolveStatus run(Iterate& it, SolverDiagnostics& diag);

private:
    Eigen::VectorXd apply_A(const std::vector<Eigen::MatrixXd>& X, const Eigen::VectorXd& x_lp) const;
    void apply_AT(const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& out, Eigen::VectorXd& out_lp) const;
    bool solve_direction(const Iterate& it, const std::vector<Eigen::MatrixXd>& Rc, const Eigen::VectorXd& rc_lp,
                         Direction& d) const;
    static double max_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX);
    static double max_step_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& dx);

    const StandardForm& sf_;
    const Tolerances& tol_;

    // per-iteration workspace
    std::vector<Eigen::MatrixXd> Sinv_;
    std::vector<Eigen::MatrixXd> Rd_;
    Eigen::VectorXd rd_lp_, rp_;
    Eigen::LLT<Eigen::MatrixXd> schur_;
};

Eigen::VectorXd Ipm::apply_A(const std::vector<Eigen::MatrixXd>& X, const Eigen::VectorXd& x_lp) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sf_.m);
    for (std::size_t b = 0; b < sf_.blocks.size(); ++b)
    {
        const auto& blk = sf_.blocks[b];
        for (std::size_t k = 0; k < blk.vars.size(); ++k)
            out(blk.vars[k]) += blk.A[k].cwiseProduct(X[b]).sum();
    }
    if (x_lp.size() > 0)
        out += sf_.lp_A * x_lp;
    return out;
}

void Ipm::apply_AT(const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& out, Eigen::VectorXd& out_lp) const
{
    out.resize(sf_.blocks.size());
    for (std::size_t b = 0; b < sf_.blocks.size(); ++b)
    {
        const auto& blk = sf_.blocks[b];
        out[b].setZero(blk.n, blk.n);
        for (std::size_t k = 0; k < blk.vars.size(); ++k)
            out[b].noalias() += y(blk.vars[k]) * blk.A[k];
    }
    out_lp = sf_.lp_A.transpose() * y;
}

double Ipm::max_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX)
{
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success)
        return 0.0;
    Eigen::MatrixXd t = llt.matrixL().solve(dX);
    t = llt.matrixL().solve(t.transpose().eval());
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    return lmin >= 0.0 ? inf : -1.0 / lmin;
}

double Ipm::max_step_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& dx)
{
    double a = inf;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx(i) < 0.0)
            a = std::min(a, -x(i) / dx(i));
    return a;
}

// HKM direction for the complementarity target Rc (full matrices, XS form):
//   M dy = Rp - A((Rc - X Rd) S^-1),  dS = Rd - A^T dy,  dX = sym((Rc - X dS) S^-1)
bool Ipm::solve_direction(const Iterate& it, const std::vector<Eigen::MatrixXd>& Rc, const Eigen::VectorXd& rc_lp,
                          Direction& d) const
{
    const auto nb = sf_.blocks.size();
    std::vector<Eigen::MatrixXd> K(nb);
    for (std::size_t b = 0; b < nb; ++b)
        K[b] = (Rc[b] - it.X[b] * Rd_[b]) * Sinv_[b];
    Eigen::VectorXd k_lp;
    if (it.x_lp.size() > 0)
        k_lp = (rc_lp - it.x_lp.cwiseProduct(rd_lp_)).cwiseQuotient(it.s_lp);
    else
        k_lp.resize(0);
    const Eigen::VectorXd rhs = rp_ - apply_A(K, k_lp);
    d.dy = schur_.solve(rhs);
    if (!d.dy.allFinite())
        return false;

    apply_AT(d.dy, d.dS, d.ds_lp);
    d.dX.resize(nb);
    for (std::size_t b = 0; b < nb; ++b)
    {
        d.dS[b] = Rd_[b] - d.dS[b];
        Eigen::MatrixXd t = (Rc[b] - it.X[b] * d.dS[b]) * Sinv_[b];
        d.dX[b] = 0.5 * (t + t.transpose());
    }
    if (it.x_lp.size() > 0)
    {
        d.ds_lp = rd_lp_ - d.ds_lp;
        d.dx_lp = (rc_lp - it.x_lp.cwiseProduct(d.ds_lp)).cwiseQuotient(it.s_lp);
    }
    else
    {
        d.ds_lp.resize(0);
        d.dx_lp.resize(0);
    }
    return true;
}

SolveStatus Ipm::run(Iterate& it, SolverDiagnostics& diag)
{
    const auto nb = sf_.blocks.size();
    const int nlp = static_cast<int>(sf_.lp_c.size());
    const int m = sf_.m;

    // Starting point in the style of SDPT3's infeasible start.
    it.X.resize(nb);
    it.S.resize(nb);
    double total_dim = nlp;
    for (std::size_t b = 0; b < nb; ++b)
    {
        const auto& blk = sf_.blocks[b];
        const double n = blk.n;
        total_dim += n;
        double ratio = 0.0, normA = 0.0;
        for (std::size_t k = 0; k < blk.vars.size(); ++k)
        {
            const double na = blk.A[k].norm();
            ratio = std::max(ratio, (1.0 + std::abs(sf_.b(blk.vars[k]))) / (1.0 + na));
            normA = std::max(normA, na);
        }
        const double zeta = std::max({10.0, std::sqrt(n), n * ratio});
        const double eta = std::max({10.0, std::sqrt(n), normA, blk.C.norm()});
        it.X[b] = zeta * Eigen::MatrixXd::Identity(blk.n, blk.n);
        it.S[b] = eta * Eigen::MatrixXd::Identity(blk.n, blk.n);
    }
    if (nlp > 0)
    {
        double ratio = 0.0, normA = 0.0;
        for (int j = 0; j < m; ++j)
        {
            const double na = sf_.lp_A.row(j).norm();
            ratio = std::max(ratio, (1.0 + std::abs(sf_.b(j))) / (1.0 + na));
            normA = std::max(normA, na);
        }
        const double n = nlp;
        const double zeta = std::max({10.0, std::sqrt(n), n * ratio});
        const double eta = std::max({10.0, std::sqrt(n), normA, sf_.lp_c.norm()});
        it.x_lp = Eigen::VectorXd::Constant(nlp, zeta);
        it.s_lp = Eigen::VectorXd::Constant(nlp, eta);
    }
    else
    {
        it.x_lp.resize(0);
        it.s_lp.resize(0);
    }
    it.y = Eigen::VectorXd::Zero(m);

    double normC2 = sf_.lp_c.squaredNorm();
    for (const auto& blk : sf_.blocks)
        normC2 += blk.C.squaredNorm();
    const double normC = std::sqrt(normC2);
    const double normb = sf_.b.norm();

    Sinv_.resize(nb);
    Rd_.resize(nb);
    std::vector<Eigen::MatrixXd> ATy;
    Eigen::VectorXd ATy_lp;
    Direction pred, corr;
    std::vector<Eigen::MatrixXd> Rc(nb);
    Eigen::VectorXd rc_lp;
    Eigen::MatrixXd M(m, m);

    int stall = 0;
    double best_merit = inf;
    double best_seen = inf; // best iterate so far, restored if the method breaks down
    Iterate best_it;
    SolverDiagnostics best_diag;
    SolveStatus status = SolveStatus::numerical_failure;
    diag.message = "iteration limit";

    for (int iter = 0;; ++iter)
    {
        // residuals and measures
        rp_ = sf_.b - apply_A(it.X, it.x_lp);
        apply_AT(it.y, ATy, ATy_lp);
        double rd2 = 0.0, xs = 0.0, pobj = 0.0;
        for (std::size_t b = 0; b < nb; ++b)
        {
            Rd_[b] = sf_.blocks[b].C - it.S[b] - ATy[b];
            rd2 += Rd_[b].squaredNorm();
            xs += it.X[b].cwiseProduct(it.S[b]).sum();
            pobj += sf_.blocks[b].C.cwiseProduct(it.X[b]).sum();
        }
        if (nlp > 0)
        {
            rd_lp_ = sf_.lp_c - it.s_lp - ATy_lp;
            rd2 += rd_lp_.squaredNorm();
            xs += it.x_lp.dot(it.s_lp);
            pobj += sf_.lp_c.dot(it.x_lp);
        }
        const double dobj = sf_.b.dot(it.y);
        const double mu = xs / std::max(total_dim, 1.0);
        const double pinf = rp_.norm() / (1.0 + normb);
        const double dinf = std::sqrt(rd2) / (1.0 + normC);
        const double gap = std::max(std::abs(pobj - dobj), std::abs(xs)) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));

        diag.iterations = iter;
        diag.primal_residual = dinf;
        diag.dual_residual = pinf;
        diag.gap = gap;
        diag.mu = mu;

        if (pinf <= tol_.feasibility && dinf <= tol_.feasibility && gap <= tol_.gap)
        {
            diag.message = "converged";
            return SolveStatus::optimal;
        }

        // certificates of infeasibility
        if (-pobj > 0.0)
        {
            const Eigen::VectorXd AX = sf_.b - rp_;
            if (AX.norm() / (-pobj) <= tol_.feasibility * 1e-1 && -pobj > 1e3 * (1.0 + normb))
            {
                diag.message = "dual ray: primal LMI system infeasible";
                return SolveStatus::infeasible;
            }
        }
        if (dobj > 0.0)
        {
            const double res = std::sqrt(std::max(0.0, normC2 + rd2 - 2.0 * [&] {
                double v = 0.0;
                for (std::size_t b = 0; b < nb; ++b)
                    v += sf_.blocks[b].C.cwiseProduct(Rd_[b]).sum();
                if (nlp > 0)
                    v += sf_.lp_c.dot(rd_lp_);
                return v;
            }()));
            if (res / dobj <= tol_.feasibility * 1e-1 && dobj > 1e3 * (1.0 + normC))
            {
                diag.message = "primal ray: objective unbounded";
                return SolveStatus::unbounded;
            }
        }

        const double merit = std::max({pinf, dinf, gap});
        if (merit < best_seen)
        {
            best_seen = merit;
            best_it = it;
            best_diag = diag;
        }
        if (merit < 0.5 * best_merit)
        {
            best_merit = merit;
            stall = 0;
        }
        else if (++stall > 25)
        {
            diag.message = "stalled";
            status = SolveStatus::numerical_failure;
            break;
        }
        if (iter >= tol_.max_iterations)
            break;

        // factorizations and Schur complement
        bool ok = true;
        M.setZero();
        for (std::size_t b = 0; b < nb && ok; ++b)
        {
            const auto& blk = sf_.blocks[b];
            Eigen::LLT<Eigen::MatrixXd> llt(it.S[b]);
            if (llt.info() != Eigen::Success)
            {
                ok = false;
                break;
            }
            Sinv_[b] = llt.solve(Eigen::MatrixXd::Identity(blk.n, blk.n));
            Sinv_[b] = 0.5 * (Sinv_[b] + Sinv_[b].transpose()).eval();
            const auto nv = blk.vars.size();
            Eigen::MatrixXd G(blk.n, blk.n);
            for (std::size_t k = 0; k < nv; ++k)
            {
                G.noalias() = it.X[b] * blk.A[k] * Sinv_[b];
                for (std::size_t l = k; l < nv; ++l)
                {
                    const double v = blk.A[l].cwiseProduct(G).sum();
                    M(blk.vars[l], blk.vars[k]) += v;
                    if (l != k)
                        M(blk.vars[k], blk.vars[l]) += v;
                }
            }
        }
        if (!ok)
        {
            diag.message = "lost positive definiteness";
            break;
        }
        if (nlp > 0)
            M.noalias() += sf_.lp_A * it.x_lp.cwiseQuotient(it.s_lp).asDiagonal() * sf_.lp_A.transpose();

        const double diag_max = m > 0 ? M.diagonal().cwiseAbs().maxCoeff() : 0.0;
        schur_.compute(M);
        for (double reg = 1e-14; schur_.info() != Eigen::Success && reg < 1e-4; reg *= 100.0)
            schur_.compute(M + reg * std::max(diag_max, 1.0) * Eigen::MatrixXd::Identity(m, m));
        if (schur_.info() != Eigen::Success)
        {
            diag.message = "Schur complement factorization failed";
            break;
        }

        // predictor
        for (std::size_t b = 0; b < nb; ++b)
            Rc[b] = -it.X[b] * it.S[b];
        if (nlp > 0)
            rc_lp = -it.x_lp.cwiseProduct(it.s_lp);
        if (!solve_direction(it, Rc, rc_lp, pred))
        {
            diag.message = "non-finite predictor";
            break;
        }
        double ap = 1.0, ad = 1.0;
        for (std::size_t b = 0; b < nb; ++b)
        {
            ap = std::min(ap, max_step(it.X[b], pred.dX[b]));
            ad = std::min(ad, max_step(it.S[b], pred.dS[b]));
        }
        if (nlp > 0)
        {
            ap = std::min(ap, max_step_lp(it.x_lp, pred.dx_lp));
            ad = std::min(ad, max_step_lp(it.s_lp, pred.ds_lp));
        }
        double xs_pred = 0.0;
        for (std::size_t b = 0; b < nb; ++b)
            xs_pred += (it.X[b] + ap * pred.dX[b]).cwiseProduct(it.S[b] + ad * pred.dS[b]).sum();
        if (nlp > 0)
            xs_pred += (it.x_lp + ap * pred.dx_lp).dot(it.s_lp + ad * pred.ds_lp);
        const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
        const double sigma = std::clamp(std::pow(std::max(xs_pred, 0.0) / xs, expon), 0.0, 1.0);

        // corrector
        for (std::size_t b = 0; b < nb; ++b)
        {
            const auto n = sf_.blocks[b].n;
            Rc[b] = sigma * mu * Eigen::MatrixXd::Identity(n, n) - it.X[b] * it.S[b] - pred.dX[b] * pred.dS[b];
        }
        if (nlp > 0)
            rc_lp = Eigen::VectorXd::Constant(nlp, sigma * mu) - it.x_lp.cwiseProduct(it.s_lp) -
                    pred.dx_lp.cwiseProduct(pred.ds_lp);
        if (!solve_direction(it, Rc, rc_lp, corr))
        {
            diag.message = "non-finite corrector";
            break;
        }
        ap = inf;
        ad = inf;
        for (std::size_t b = 0; b < nb; ++b)
        {
            ap = std::min(ap, max_step(it.X[b], corr.dX[b]));
            ad = std::min(ad, max_step(it.S[b], corr.dS[b]));
        }
        if (nlp > 0)
        {
            ap = std::min(ap, max_step_lp(it.x_lp, corr.dx_lp));
            ad = std::min(ad, max_step_lp(it.s_lp, corr.ds_lp));
        }
        const double gamma = 0.9 + 0.09 * std::min({ap, ad, 1.0});
        ap = std::min(1.0, gamma * ap);
        ad = std::min(1.0, gamma * ad);
        if (ap < 1e-12 && ad < 1e-12)
        {
            diag.message = "step length collapsed";
            break;
        }

        for (std::size_t b = 0; b < nb; ++b)
        {
            it.X[b] += ap * corr.dX[b];
            it.S[b] += ad * corr.dS[b];
            it.X[b] = 0.5 * (it.X[b] + it.X[b].transpose()).eval();
            it.S[b] = 0.5 * (it.S[b] + it.S[b].transpose()).eval();
        }
        if (nlp > 0)
        {
            it.x_lp += ap * corr.dx_lp;
            it.s_lp += ad * corr.ds_lp;
        }
        it.y += ad * corr.dy;
    }

    if (best_seen < std::max({diag.primal_residual, diag.dual_residual, diag.gap}))
    {
        const std::string why = diag.message;
        it = std::move(best_it);
        diag = best_diag;
        diag.message = why + ", best iterate restored";
    }
    // Accept a slightly looser optimum when progress stops close to it.
    if (diag.primal_residual <= 1e-7 && diag.dual_residual <= 1e-7 && diag.gap <= 1e-7)
    {
        diag.message += " (accepted at 1e-7)";
        return SolveStatus::optimal;
    }
    return status;
}

} // namespace

SdpSolution InteriorPointBackend::solve(const SdpProblem& problem, const Tolerances& tol) const
{
    Eigen::VectorXd c_max;
    const StandardForm sf = lower_problem(problem, c_max);
    const int n = problem.num_scalars();
    const auto& cons = problem.constraints();

    SdpSolution sol;
    sol.duals.resize(cons.size());
    for (std::size_t k = 0; k < cons.size(); ++k)
    {
        const int sz = cons[k].kind == ConstraintKind::lmi ? cons[k].matrix.size() : 1;
        sol.duals[k] = Eigen::MatrixXd::Zero(sz, sz);
    }

    if (sf.inconsistent_equalities)
    {
        sol.status = SolveStatus::infeasible;
        sol.diagnostics.message = "inconsistent linear equalities";
        sol.x.assign(n, 0.0);
        return sol;
    }

    Iterate it;
    Ipm ipm(sf, tol);
    sol.status = ipm.run(it, sol.diagnostics);

    const Eigen::VectorXd x = sf.x0 + sf.T * it.y;
    sol.x.assign(x.data(), x.data() + n);
    sol.objective = sol.value(problem.objective());

    double pobj = 0.0;
    for (std::size_t b = 0; b < sf.blocks.size(); ++b)
    {
        sol.duals[sf.blocks[b].constraint] = it.X[b];
        pobj += sf.blocks[b].C.cwiseProduct(it.X[b]).sum();
    }
    for (std::size_t r = 0; r < sf.lp_constraint.size(); ++r)
    {
        sol.duals[sf.lp_constraint[r]](0, 0) = it.x_lp(r);
        pobj += sf.lp_c(r) * it.x_lp(r);
    }
    const double dual_max_form = sf.objective_constant + pobj;
    sol.dual_objective = problem.sense() == Sense::maximize ? dual_max_form : -dual_max_form;

    // Equality multipliers from stationarity of the maximize-form Lagrangian
    //   c + sum_b <F_i, X_b> + sum_r a_ri x_r - (E^T nu)_i = 0.
    std::vector<int> eq_rows;
    for (std::size_t k = 0; k < cons.size(); ++k)
        if (cons[k].kind == ConstraintKind::equality)
            eq_rows.push_back(static_cast<int>(k));
    if (!eq_rows.empty())
    {
        Eigen::VectorXd g = c_max;
        for (std::size_t k = 0; k < cons.size(); ++k)
        {
            const auto& con = cons[k];
            if (con.kind == ConstraintKind::lmi)
                for (const auto& [id, F] : con.matrix.terms)
                    g(id) += F.cwiseProduct(sol.duals[k]).sum();
            else if (con.kind == ConstraintKind::inequality)
                for (const auto& [id, c] : con.linear.terms)
                    g(id) += c * sol.duals[k](0, 0);
        }
        Eigen::MatrixXd Et(n, eq_rows.size());
        for (std::size_t r = 0; r < eq_rows.size(); ++r)
            Et.col(r) = dense_row(cons[eq_rows[r]].linear, n);
        const Eigen::VectorXd nu = Et.completeOrthogonalDecomposition().solve(g);
        for (std::size_t r = 0; r < eq_rows.size(); ++r)
            sol.duals[eq_rows[r]](0, 0) = nu(r);
    }
    return sol;
}

} // namespace secrecy::conic
