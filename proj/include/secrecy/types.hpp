#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace secrecy
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Error categories raised across the library.
enum class Errc
{
    dimension_mismatch,
    non_positive_power,
    zero_bob_channel,
    empty_eve_list,
    negative_radius,
    non_hermitian_input,
    solver_failure,
    numerical_failure,
    infeasible,
    rank_extraction_failed,
    requires_multiple_antennas,
    invalid_argument,
};

[[nodiscard]] const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what);

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// One eavesdropper: channel estimate and the radius of its uncertainty ball.
struct EveChannel
{
    CVector g_bar;
    double epsilon = 0.0;
};

/// Channels and power budget for one robust design problem. Noise variances
/// are normalized to one, so `power` is an SNR-like linear quantity.
struct ProblemInstance
{
    CVector h;
    std::vector<EveChannel> eves;
    double power = 0.0;

    [[nodiscard]] int nt() const noexcept { return static_cast<int>(h.size()); }
    [[nodiscard]] int num_eves() const noexcept { return static_cast<int>(eves.size()); }
};

/// Throws `Error` naming the first violated invariant.
void validate(const ProblemInstance& instance);

/// Signal covariance W, artificial-noise covariance Sigma and, when W is rank
/// one, the beamforming vector with W = beam * beam^H.
struct TransmitDesign
{
    CMatrix W;
    CMatrix Sigma;
    std::optional<CVector> beam;
};

/// Checks PSD-ness, the power budget and beam consistency within the design
/// tolerances; throws `Error` on violation.
void check_design(const TransmitDesign& design, double power);

[[nodiscard]] double hermitian_asymmetry(const CMatrix& A);
[[nodiscard]] bool is_hermitian(const CMatrix& A, double rel_tol = 1e-12);

/// Hermitian part of A, with the diagonal forced real.
[[nodiscard]] CMatrix hermitian_part(const CMatrix& A);

/// Clips negative eigenvalues of a Hermitian matrix.
[[nodiscard]] CMatrix project_psd(const CMatrix& A);

[[nodiscard]] double min_eigenvalue(const CMatrix& A);

/// Real-valued quadratic form x^H A x of a Hermitian matrix.
[[nodiscard]] double quad_form(const CMatrix& A, const CVector& x);

[[nodiscard]] inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
[[nodiscard]] inline double linear_to_db(double p) { return 10.0 * std::log10(p); }

} // namespace secrecy
