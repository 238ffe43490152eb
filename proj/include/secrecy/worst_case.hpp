#pragma once

// Exact worst-case eavesdropper evaluation over Euclidean uncertainty balls,
// independent of the SDP machinery.

#include "secrecy/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace secrecy
{

/// Result of  minimize 0.5 x'Hx + g'x  subject to ||x|| <= radius.
struct TrsResult
{
    Eigen::VectorXd x;
    double value = 0.0;
    double multiplier = 0.0; // sigma >= 0 with (H + sigma I) x = -g
    bool on_boundary = false;
    bool hard_case = false;
    int iterations = 0;
};

/// Globally solves the trust-region subproblem for symmetric, possibly
/// indefinite H. Uses a full eigendecomposition and a safeguarded Newton
/// iteration on the secular equation 1/radius - 1/||x(sigma)|| = 0; the hard
/// case is completed along the leftmost eigenvector. Throws
/// Errc::numerical_failure when the root finder fails to converge.
[[nodiscard]] TrsResult solve_trs(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, double radius);

/// 1 + g^H W g / (1 + g^H Sigma g).
[[nodiscard]] double eve_ratio(const CVector& g, const CMatrix& W, const CMatrix& Sigma);

/// Bob's SINR ratio 1 + h^H W h / (1 + h^H Sigma h).
[[nodiscard]] double bob_ratio(const CVector& h, const CMatrix& W, const CMatrix& Sigma);

struct WorstCaseRatio
{
    double ratio = 1.0;
    CVector worst_g; // argmax certificate inside the ball
    int trs_solves = 0;
};

/// max over ||g - g_bar|| <= epsilon of eve_ratio(g, W, Sigma).
///
/// For a trial level t the test "some g reaches ratio t" is the sign of
///   max_g g^H (W - (t-1) Sigma) g - (t-1),
/// a trust-region subproblem solved exactly on the real embedding. The
/// bracket [ratio(g_bar), 1 + lambda_max(W) (||g_bar|| + epsilon)^2] shrinks
/// by bisection, accelerated with Dinkelbach steps (the TRS value at the
/// incumbent also bounds the optimum from above because 1 + g^H Sigma g >= 1),
/// until its width is below 1e-9 of the upper end.
[[nodiscard]] WorstCaseRatio worst_ratio(const CVector& g_bar, double epsilon, const CMatrix& W,
                                         const CMatrix& Sigma);

struct WorstCaseEveReport
{
    int k = 0;
    double worst_ratio = 1.0;
    CVector worst_g;
    double bob_term = 0.0;     // log2 bob_ratio
    double secrecy_term = 0.0; // bob_term - log2 worst_ratio
};

struct DesignEvaluation
{
    double rate = 0.0; // max(0, min_k secrecy_term), bps/Hz
    std::vector<WorstCaseEveReport> reports;
};

[[nodiscard]] DesignEvaluation evaluate_design(const ProblemInstance& instance, const TransmitDesign& design);

} // namespace secrecy
