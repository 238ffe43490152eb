#pragma once

// Worst-case secrecy-rate maximization by a line search over the Eve-side
// ratio bound beta, each step an SDP in Charnes-Cooper variables.

#include "secrecy/conic/sdp.hpp"
#include "secrecy/types.hpp"
#include "secrecy/worst_case.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace secrecy
{

/// Scaled variables Z = xi W, Q = xi Sigma with their S-procedure multipliers.
struct CharnesCooperPoint
{
    CMatrix Z;
    CMatrix Q;
    double xi = 0.0;
    std::vector<double> mu;
};

/// T_k = [[mu I - M, -M g], [-g^H M, -eps^2 mu - g^H M g + (beta - 1) xi]]
/// with M = Z - (beta - 1) Q. PSD iff g^H M g <= (beta - 1) xi on the whole
/// ball |g - g_bar| <= eps for this mu.
[[nodiscard]] CMatrix build_Tk(const CMatrix& Z, const CMatrix& Q, double beta, double xi, double mu,
                               const CVector& g_bar, double epsilon);

struct PhiResult
{
    double value = 0.0;
    CharnesCooperPoint point;
    conic::SolverDiagnostics diagnostics;
    bool retried = false;
};

/// Upper end 1 + P |h|^2 of the beta range.
[[nodiscard]] double beta_upper_bound(const ProblemInstance& instance);

/// The SDP for one beta:
///   maximize xi + h^H (Z + Q) h
///   s.t. beta (xi + h^H Q h) = 1, T_k >= 0, Tr(Z + Q) <= xi P,
///        Z, Q >= 0, xi >= 0, mu >= 0.
[[nodiscard]] conic::SdpProblem build_phi_problem(double beta, const ProblemInstance& instance);

/// Solves the SDP above. On a solver failure, retries once with tolerances
/// loosened to 1e-6, then throws conic::SolverFailure naming beta. At
/// beta = 1 the LMIs pin Z to the complement of the exactly known
/// eavesdroppers (Z = 0 if any eps_k > 0) and the optimum is returned in
/// closed form.
[[nodiscard]] PhiResult phi(double beta, const ProblemInstance& instance, const conic::Tolerances& tol = {},
                            const conic::SdpBackend& backend = conic::default_backend());

enum class SampleStage
{
    grid,
    golden,
};

struct LineSearchSample
{
    double beta = 0.0;
    double phi = 0.0; // 0 when the evaluation failed
    bool ok = false;
    SampleStage stage = SampleStage::grid;
    std::string message;
};

struct LineSearchTrace
{
    std::vector<LineSearchSample> samples;
    std::vector<std::pair<double, double>> brackets; // golden-section history
    double beta_star = 1.0;
    double phi_star = 1.0;
};

struct SearchOptions
{
    int grid_points = 40;
    int golden_iterations = 30;
    /// When set, an N-point grid without refinement.
    std::optional<int> exhaustive;
    int threads = 1;
    conic::Tolerances tolerances;
    const conic::SdpBackend* backend = nullptr; // default_backend() when null
    /// Receives warnings about skipped grid points; stderr when empty.
    std::function<void(const std::string&)> warn;
};

struct SecrecyResult
{
    TransmitDesign design;
    double rate_worst_case = 0.0; // bps/Hz
    double beta_star = 1.0;
    LineSearchTrace trace;
    std::vector<WorstCaseEveReport> per_eve;
    /// lambda_2 / lambda_1 of W, set when a beam was extracted.
    std::optional<double> lambda_ratio;
};

/// Grid scan of phi on [1, 1 + P|h|^2], golden-section refinement around the
/// best grid point, recovery W = Z / xi, Sigma = Q / xi and oracle reports.
/// Ties in phi go to the smallest beta. Failed grid points are skipped with a
/// warning; fewer than 80% successes, or a failure at beta = 1, throws.
[[nodiscard]] SecrecyResult solve_srm(const ProblemInstance& instance, const SearchOptions& options = {});

/// W = Z / xi, Sigma = Q / xi, projected onto the PSD cone and scaled back
/// into the power budget if roundoff pushed it out.
[[nodiscard]] TransmitDesign recover_design(const CharnesCooperPoint& point, double power);

} // namespace secrecy
