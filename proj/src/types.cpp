#include "secrecy/types.hpp"

#include <algorithm>

namespace secrecy
{

const char* to_string(Errc code) noexcept
{
    switch (code)
    {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_positive_power: return "NonPositivePower";
    case Errc::zero_bob_channel: return "ZeroBobChannel";
    case Errc::empty_eve_list: return "EmptyEveList";
    case Errc::negative_radius: return "NegativeRadius";
    case Errc::non_hermitian_input: return "NonHermitianInput";
    case Errc::solver_failure: return "SolverFailure";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::infeasible: return "Infeasible";
    case Errc::rank_extraction_failed: return "RankExtractionFailed";
    case Errc::requires_multiple_antennas: return "RequiresMultipleAntennas";
    case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void validate(const ProblemInstance& instance)
{
    const auto nt = instance.h.size();
    if (nt < 1)
        throw Error(Errc::dimension_mismatch, "Bob channel must have at least one antenna");
    if (instance.eves.empty())
        throw Error(Errc::empty_eve_list, "at least one eavesdropper is required");
    for (std::size_t k = 0; k < instance.eves.size(); ++k)
    {
        if (instance.eves[k].g_bar.size() != nt)
            throw Error(Errc::dimension_mismatch,
                        "eavesdropper " + std::to_string(k) + " channel length " +
                            std::to_string(instance.eves[k].g_bar.size()) + " != " + std::to_string(nt));
    }
    for (std::size_t k = 0; k < instance.eves.size(); ++k)
    {
        const double eps = instance.eves[k].epsilon;
        if (!(eps >= 0.0) || !std::isfinite(eps))
            throw Error(Errc::negative_radius, "eavesdropper " + std::to_string(k) + " radius must be >= 0");
    }
    if (!(instance.power > 0.0) || !std::isfinite(instance.power))
        throw Error(Errc::non_positive_power, "power must be finite and > 0");
    if (instance.h.squaredNorm() == 0.0)
        throw Error(Errc::zero_bob_channel, "Bob channel is identically zero");
}

double hermitian_asymmetry(const CMatrix& A)
{
    if (A.rows() != A.cols())
        return std::numeric_limits<double>::infinity();
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& A, double rel_tol)
{
    if (A.rows() != A.cols())
        return false;
    if (A.size() == 0)
        return true;
    const double maxabs = A.cwiseAbs().maxCoeff();
    return hermitian_asymmetry(A) <= rel_tol * (1.0 + maxabs);
}

CMatrix hermitian_part(const CMatrix& A)
{
    CMatrix H = 0.5 * (A + A.adjoint());
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        H(i, i) = H(i, i).real();
    return H;
}

CMatrix project_psd(const CMatrix& A)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(A));
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return hermitian_part(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
}

double min_eigenvalue(const CMatrix& A)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(A), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double quad_form(const CMatrix& A, const CVector& x)
{
    return x.dot(A * x).real();
}

void check_design(const TransmitDesign& design, double power)
{
    const auto n = design.W.rows();
    if (design.W.cols() != n || design.Sigma.rows() != n || design.Sigma.cols() != n)
        throw Error(Errc::dimension_mismatch, "W and Sigma must be square of equal size");
    if (!is_hermitian(design.W) || !is_hermitian(design.Sigma))
        throw Error(Errc::non_hermitian_input, "covariances must be Hermitian");
    const double tr = (design.W + design.Sigma).trace().real();
    const double floor = -1e-8 * std::max(tr, 1.0);
    if (n > 0 && (min_eigenvalue(design.W) < floor || min_eigenvalue(design.Sigma) < floor))
        throw Error(Errc::invalid_argument, "covariances must be positive semidefinite");
    if (tr > power * (1.0 + 1e-8))
        throw Error(Errc::invalid_argument,
                    "trace " + std::to_string(tr) + " exceeds power budget " + std::to_string(power));
    if (design.beam)
    {
        if (design.beam->size() != n)
            throw Error(Errc::dimension_mismatch, "beam length must match covariance size");
        const double err = (design.W - (*design.beam) * design.beam->adjoint()).norm();
        if (err > 1e-6 * std::max(design.W.trace().real(), 1e-300))
            throw Error(Errc::invalid_argument, "beam does not reproduce W");
    }
}

} // namespace secrecy
