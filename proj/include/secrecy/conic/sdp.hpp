#pragma once

// Backend-neutral semidefinite programs over real scalar variables.
//
// A problem is built from scalar variables (free or nonnegative), matrix
// variables (real symmetric or complex Hermitian PSD blocks, stored as their
// real parameters), linear equalities, linear inequalities and linear matrix
// inequalities. Complex Hermitian LMIs are lowered to real symmetric ones by
// embed_complex, so any real-symmetric-cone solver can serve as a backend.

#include "secrecy/types.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace secrecy::conic
{

/// Handle to one real scalar variable.
struct Var
{
    int id = -1;
};

struct ConstraintId
{
    int id = -1;
};

/// constant + sum coeff * x[id].
struct LinExpr
{
    double constant = 0.0;
    std::vector<std::pair<int, double>> terms;

    LinExpr() = default;
    explicit LinExpr(double c) : constant(c) {}

    LinExpr& add(Var v, double coeff);
    LinExpr& operator+=(const LinExpr& other);
    LinExpr& operator*=(double s);
};

[[nodiscard]] LinExpr operator+(LinExpr a, const LinExpr& b);
[[nodiscard]] LinExpr operator*(double s, LinExpr a);

/// Affine real symmetric matrix: constant + sum x[id] * coeff.
struct SymAffine
{
    Eigen::MatrixXd constant;
    std::vector<std::pair<int, Eigen::MatrixXd>> terms;

    SymAffine() = default;
    explicit SymAffine(int n) : constant(Eigen::MatrixXd::Zero(n, n)) {}

    [[nodiscard]] int size() const noexcept { return static_cast<int>(constant.rows()); }
    SymAffine& add(Var v, Eigen::MatrixXd coeff);
};

/// Affine complex Hermitian matrix: constant + sum x[id] * coeff.
struct HermAffine
{
    CMatrix constant;
    std::vector<std::pair<int, CMatrix>> terms;

    HermAffine() = default;
    explicit HermAffine(int n) : constant(CMatrix::Zero(n, n)) {}

    [[nodiscard]] int size() const noexcept { return static_cast<int>(constant.rows()); }
    HermAffine& add(Var v, CMatrix coeff);
};

/// [[Re H, -Im H], [Im H, Re H]]. Throws Errc::non_hermitian_input.
[[nodiscard]] Eigen::MatrixXd embed_complex(const CMatrix& H);

/// Hermitian Y with Re Tr(H Y) = <embed_complex(H), X> for every Hermitian H.
/// This is how the dual of a lowered complex LMI is read back.
[[nodiscard]] CMatrix dual_from_embedding(const Eigen::MatrixXd& X);

[[nodiscard]] SymAffine lower(const HermAffine& expr);

/// Number of real parameters of an n x n Hermitian matrix.
[[nodiscard]] constexpr int hermitian_dim(int n) noexcept { return n * n; }

/// Basis element p of the real parameterization of n x n Hermitian matrices:
/// diagonal entries first, then (Re, Im) pairs of the strict upper triangle
/// in row-major order.
[[nodiscard]] CMatrix hermitian_basis(int n, int p);

/// Real parameter vector of a Hermitian matrix in the basis above.
[[nodiscard]] Eigen::VectorXd hermitian_params(const CMatrix& H);

struct SymmetricVar
{
    int n = 0;
    std::vector<int> ids; // upper triangle, row-major
    ConstraintId psd;

    [[nodiscard]] SymAffine expr() const;
};

struct HermitianVar
{
    int n = 0;
    std::vector<int> ids; // hermitian_basis order
    ConstraintId psd;

    [[nodiscard]] HermAffine expr() const;
    /// Re Tr(C H) for a Hermitian coefficient C. x^H H x is linear(x x^H).
    [[nodiscard]] LinExpr linear(const CMatrix& C) const;
};

enum class VarKind
{
    free_scalar,
    nonneg_scalar,
    psd_block,
    hermitian_psd_block,
};

struct VariableInfo
{
    std::string name;
    VarKind kind = VarKind::free_scalar;
    int n = 1;
    std::vector<int> scalars;
};

enum class ConstraintKind
{
    equality,   // linear == 0
    inequality, // linear >= 0
    lmi,        // matrix >= 0 in the PSD order
};

struct Constraint
{
    std::string label;
    ConstraintKind kind = ConstraintKind::inequality;
    LinExpr linear;
    SymAffine matrix;
    int complex_size = 0; // > 0 when lowered from an n x n Hermitian LMI
};

enum class Sense
{
    minimize,
    maximize,
};

class SdpProblem
{
public:
    Var add_free(std::string name);
    Var add_nonneg(std::string name);
    SymmetricVar add_psd_block(std::string name, int n);
    HermitianVar add_hermitian_psd(std::string name, int n);

    ConstraintId add_equality(LinExpr expr, std::string label = {});
    ConstraintId add_inequality(LinExpr expr, std::string label = {});
    ConstraintId add_lmi(SymAffine expr, std::string label = {});
    ConstraintId add_lmi(const HermAffine& expr, std::string label = {});

    void set_objective(Sense sense, LinExpr objective);

    [[nodiscard]] int num_scalars() const noexcept { return num_scalars_; }
    [[nodiscard]] const std::vector<VariableInfo>& variables() const noexcept { return variables_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] Sense sense() const noexcept { return sense_; }
    [[nodiscard]] const LinExpr& objective() const noexcept { return objective_; }

private:
    int new_scalar();
    void check_refs(const LinExpr& e) const;
    void check_refs(const SymAffine& e) const;

    int num_scalars_ = 0;
    std::vector<VariableInfo> variables_;
    std::vector<Constraint> constraints_;
    Sense sense_ = Sense::minimize;
    LinExpr objective_;
};

/// Human-readable dump of variables, objective and constraint coefficients.
void dump(std::ostream& os, const SdpProblem& problem);

struct Tolerances
{
    double feasibility = 1e-8;
    double gap = 1e-8;
    int max_iterations = 200;
};

enum class SolveStatus
{
    optimal,
    infeasible,
    unbounded,
    numerical_failure,
};

[[nodiscard]] const char* to_string(SolveStatus s) noexcept;

struct SolverDiagnostics
{
    int iterations = 0;
    double primal_residual = 0.0; // relative, user (LMI) side
    double dual_residual = 0.0;   // relative, multiplier side
    double gap = 0.0;             // |primal - dual| / (1 + |primal|)
    double mu = 0.0;
    std::string message;
};

struct SdpSolution
{
    SolveStatus status = SolveStatus::numerical_failure;
    double objective = 0.0;
    double dual_objective = 0.0;
    std::vector<double> x;
    /// One entry per constraint: 1x1 for equalities and inequalities, the
    /// (real, possibly embedded) multiplier matrix for LMIs. Multipliers are
    /// nonnegative / PSD for inequalities and LMIs.
    std::vector<Eigen::MatrixXd> duals;
    SolverDiagnostics diagnostics;

    [[nodiscard]] bool optimal() const noexcept { return status == SolveStatus::optimal; }
    [[nodiscard]] double value(Var v) const { return x.at(v.id); }
    [[nodiscard]] double value(const LinExpr& e) const;
    [[nodiscard]] Eigen::MatrixXd value(const SymmetricVar& v) const;
    [[nodiscard]] CMatrix value(const HermitianVar& v) const;
    [[nodiscard]] double scalar_dual(ConstraintId c) const { return duals.at(c.id)(0, 0); }
    [[nodiscard]] const Eigen::MatrixXd& dual(ConstraintId c) const { return duals.at(c.id); }
    /// Complex multiplier of a lowered Hermitian LMI.
    [[nodiscard]] CMatrix hermitian_dual(ConstraintId c) const;
};

class SolverFailure : public Error
{
public:
    SolverFailure(const std::string& what, SolverDiagnostics diag);

    [[nodiscard]] const SolverDiagnostics& diagnostics() const noexcept { return diag_; }

private:
    SolverDiagnostics diag_;
};

/// Throws SolverFailure unless the solution is optimal.
void require_optimal(const SdpSolution& solution, const std::string& context);

class SdpBackend
{
public:
    virtual ~SdpBackend() = default;
    [[nodiscard]] virtual SdpSolution solve(const SdpProblem& problem, const Tolerances& tol) const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

/// Dense infeasible primal-dual path-following method (HKM search direction,
/// Mehrotra predictor-corrector) for small block-diagonal SDPs.
class InteriorPointBackend final : public SdpBackend
{
public:
    [[nodiscard]] SdpSolution solve(const SdpProblem& problem, const Tolerances& tol) const override;
    [[nodiscard]] std::string name() const override { return "dense-hkm-ipm"; }
};

[[nodiscard]] const SdpBackend& default_backend();

[[nodiscard]] SdpSolution solve(const SdpProblem& problem, const Tolerances& tol = {});

} // namespace secrecy::conic
