#pragma once

// Power minimization at a fixed secrecy-rate target and rank-one beam
// extraction, with the dual certificate that forces rank(W) = 1.

#include "secrecy/conic/sdp.hpp"
#include "secrecy/robust_srm.hpp"
#include "secrecy/types.hpp"

#include <vector>

namespace secrecy
{

/// Rate target and Bob-side ratio alpha, held fixed so the program is an SDP.
struct PmProblemSpec
{
    ProblemInstance instance;
    double rate_target = 0.0; // R*, bps/Hz
    double alpha = 1.0;       // >= 2^R*

    /// Eve-side ratio bound 2^{-R*} alpha.
    [[nodiscard]] double gamma() const { return std::exp2(-rate_target) * alpha; }
};

/// Multipliers of W >= 0 (Y), of A_k >= 0 (B_k) and of the Bob constraint (eta).
struct DualCertificate
{
    CMatrix Y;
    std::vector<CMatrix> B;
    double eta = 0.0;
};

struct PmSolution
{
    TransmitDesign design;
    std::vector<double> lambdas;
    DualCertificate certificate;
    double objective = 0.0;
    /// W as returned by the interior-point method, before refinement.
    CMatrix interior_point_W;
    /// True when design, lambdas and certificate come from the Newton
    /// refinement of the KKT system on the active face.
    bool refined = false;
    conic::SolverDiagnostics diagnostics;
};

/// A_k = [[lambda I, 0], [0, -lambda eps^2 + gamma - 1]] - G^H (W + (1 - gamma) Sigma) G,
/// G = [I, g_bar], gamma = 2^{-R*} alpha.
[[nodiscard]] CMatrix build_Ak(const CMatrix& W, const CMatrix& Sigma, double gamma, double lambda,
                               const CVector& g_bar, double epsilon);

/// h^H (W + (1 - alpha) Sigma) h + 1 - alpha, which must be >= 0.
[[nodiscard]] double bob_constraint(const PmProblemSpec& spec, const TransmitDesign& design);

/// minimize Tr(W + Sigma) s.t. bob_constraint >= 0, A_k >= 0, W, Sigma >= 0, lambda >= 0.
/// Throws Error(Errc::infeasible) when the target is unreachable at this
/// alpha, conic::SolverFailure on numerical trouble. At gamma = 1 (no Eve
/// leakage allowed) the feasible set has no interior and the optimum is
/// returned in closed form.
[[nodiscard]] PmSolution solve_pm(const PmProblemSpec& spec, const conic::Tolerances& tol = {},
                                  const conic::SdpBackend& backend = conic::default_backend());

/// |I - eta h h^H + sum_k G_k B_k G_k^H - Y|_F.
[[nodiscard]] double stationarity_residual(const PmProblemSpec& spec, const DualCertificate& cert);

/// |W Y|_F / Tr(W); 0 when W = 0.
[[nodiscard]] double complementarity_residual(const CMatrix& W, const DualCertificate& cert);

struct RankOneResult
{
    CVector beam;
    double lambda_ratio = 0.0; // lambda_2 / lambda_1 of the interior-point W
    bool projected = false;    // ratio test failed and W was replaced by its top eigenpair
};

/// Principal eigenpair of W as w = sqrt(lambda_1) u_1 with h^H w >= 0. When
/// lambda_2 / lambda_1 exceeds 1e-6 the projected W is re-checked against the
/// power-minimization constraints (tolerance 1e-6); Errc::rank_extraction_failed
/// if they break. A zero W at R* = 0 yields the zero vector.
[[nodiscard]] RankOneResult extract_rank_one(const PmProblemSpec& spec, const PmSolution& solution);

/// solve_srm, then power minimization at the stage-1 rate and Bob ratio, beam
/// extraction and oracle re-evaluation of (w w^H, Sigma). Throws
/// Errc::numerical_failure if the final rate drops below R* - 1e-5 or the
/// power exceeds P (1 + 1e-7).
[[nodiscard]] SecrecyResult full_pipeline(const ProblemInstance& instance, const SearchOptions& options = {});

} // namespace secrecy
