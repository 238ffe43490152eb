#include "secrecy/conic/sdp.hpp"

#include <iomanip>
#include <ostream>

namespace secrecy::conic
{

LinExpr& LinExpr::add(Var v, double coeff)
{
    terms.emplace_back(v.id, coeff);
    return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& other)
{
    constant += other.constant;
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    return *this;
}

LinExpr& LinExpr::operator*=(double s)
{
    constant *= s;
    for (auto& t : terms)
        t.second *= s;
    return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b)
{
    a += b;
    return a;
}

LinExpr operator*(double s, LinExpr a)
{
    a *= s;
    return a;
}

SymAffine& SymAffine::add(Var v, Eigen::MatrixXd coeff)
{
    terms.emplace_back(v.id, std::move(coeff));
    return *this;
}

HermAffine& HermAffine::add(Var v, CMatrix coeff)
{
    terms.emplace_back(v.id, std::move(coeff));
    return *this;
}

Eigen::MatrixXd embed_complex(const CMatrix& H)
{
    if (!is_hermitian(H))
        throw Error(Errc::non_hermitian_input,
                    "embed_complex: asymmetry " + std::to_string(hermitian_asymmetry(H)));
    const auto n = H.rows();
    const Eigen::MatrixXd re = 0.5 * (H.real() + H.real().transpose());
    const Eigen::MatrixXd im = 0.5 * (H.imag() - H.imag().transpose());
    Eigen::MatrixXd out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = re;
    out.topRightCorner(n, n) = -im;
    out.bottomLeftCorner(n, n) = im;
    out.bottomRightCorner(n, n) = re;
    return out;
}

CMatrix dual_from_embedding(const Eigen::MatrixXd& X)
{
    const auto n = X.rows() / 2;
    if (X.rows() != 2 * n || X.cols() != X.rows())
        throw Error(Errc::dimension_mismatch, "dual_from_embedding expects a 2n x 2n matrix");
    const Eigen::MatrixXd re = X.topLeftCorner(n, n) + X.bottomRightCorner(n, n);
    const Eigen::MatrixXd im = X.bottomLeftCorner(n, n) - X.topRightCorner(n, n);
    CMatrix Y(n, n);
    Y.real() = re;
    Y.imag() = im;
    return hermitian_part(Y);
}

SymAffine lower(const HermAffine& expr)
{
    SymAffine out;
    out.constant = embed_complex(expr.constant);
    out.terms.reserve(expr.terms.size());
    for (const auto& [id, coeff] : expr.terms)
        out.terms.emplace_back(id, embed_complex(coeff));
    return out;
}

namespace
{

std::pair<int, int> upper_pair(int n, int k)
{
    for (int i = 0; i < n; ++i)
    {
        const int row_len = n - i - 1;
        if (k < row_len)
            return {i, i + 1 + k};
        k -= row_len;
    }
    throw Error(Errc::invalid_argument, "upper-triangle index out of range");
}

} // namespace

CMatrix hermitian_basis(int n, int p)
{
    if (p < 0 || p >= hermitian_dim(n))
        throw Error(Errc::invalid_argument, "hermitian_basis index out of range");
    CMatrix E = CMatrix::Zero(n, n);
    if (p < n)
    {
        E(p, p) = 1.0;
        return E;
    }
    const auto [i, j] = upper_pair(n, (p - n) / 2);
    if ((p - n) % 2 == 0)
    {
        E(i, j) = 1.0;
        E(j, i) = 1.0;
    }
    else
    {
        E(i, j) = Complex(0.0, 1.0);
        E(j, i) = Complex(0.0, -1.0);
    }
    return E;
}

Eigen::VectorXd hermitian_params(const CMatrix& H)
{
    const int n = static_cast<int>(H.rows());
    Eigen::VectorXd x(hermitian_dim(n));
    int p = 0;
    for (int i = 0; i < n; ++i)
        x(p++) = H(i, i).real();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
        {
            x(p++) = H(i, j).real();
            x(p++) = H(i, j).imag();
        }
    return x;
}

SymAffine SymmetricVar::expr() const
{
    SymAffine e(n);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
        {
            Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
            E(i, j) = 1.0;
            E(j, i) = 1.0;
            e.add(Var{ids[k++]}, std::move(E));
        }
    return e;
}

HermAffine HermitianVar::expr() const
{
    HermAffine e(n);
    for (int p = 0; p < hermitian_dim(n); ++p)
        e.add(Var{ids[p]}, hermitian_basis(n, p));
    return e;
}

LinExpr HermitianVar::linear(const CMatrix& C) const
{
    LinExpr e;
    for (int p = 0; p < hermitian_dim(n); ++p)
    {
        const double c = (C * hermitian_basis(n, p)).trace().real();
        if (c != 0.0)
            e.add(Var{ids[p]}, c);
    }
    return e;
}

int SdpProblem::new_scalar()
{
    return num_scalars_++;
}

Var SdpProblem::add_free(std::string name)
{
    const int id = new_scalar();
    variables_.push_back({std::move(name), VarKind::free_scalar, 1, {id}});
    return Var{id};
}

Var SdpProblem::add_nonneg(std::string name)
{
    const int id = new_scalar();
    variables_.push_back({name, VarKind::nonneg_scalar, 1, {id}});
    add_inequality(LinExpr{}.add(Var{id}, 1.0), name + " >= 0");
    return Var{id};
}

SymmetricVar SdpProblem::add_psd_block(std::string name, int n)
{
    if (n < 1)
        throw Error(Errc::invalid_argument, "psd block size must be >= 1");
    SymmetricVar v;
    v.n = n;
    for (int k = 0; k < n * (n + 1) / 2; ++k)
        v.ids.push_back(new_scalar());
    variables_.push_back({name, VarKind::psd_block, n, v.ids});
    v.psd = add_lmi(v.expr(), name + " psd");
    return v;
}

HermitianVar SdpProblem::add_hermitian_psd(std::string name, int n)
{
    if (n < 1)
        throw Error(Errc::invalid_argument, "hermitian block size must be >= 1");
    HermitianVar v;
    v.n = n;
    for (int k = 0; k < hermitian_dim(n); ++k)
        v.ids.push_back(new_scalar());
    variables_.push_back({name, VarKind::hermitian_psd_block, n, v.ids});
    v.psd = add_lmi(v.expr(), name + " psd");
    return v;
}

void SdpProblem::check_refs(const LinExpr& e) const
{
    for (const auto& [id, c] : e.terms)
    {
        if (id < 0 || id >= num_scalars_)
            throw Error(Errc::invalid_argument, "expression references undeclared variable " + std::to_string(id));
        if (!std::isfinite(c))
            throw Error(Errc::invalid_argument, "non-finite coefficient");
    }
}

void SdpProblem::check_refs(const SymAffine& e) const
{
    const auto n = e.constant.rows();
    if (n < 1 || e.constant.cols() != n)
        throw Error(Errc::dimension_mismatch, "LMI constant must be square and nonempty");
    auto check_sym = [](const Eigen::MatrixXd& A) {
        const double scale = 1.0 + A.cwiseAbs().maxCoeff();
        if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw Error(Errc::non_hermitian_input, "LMI coefficient is not symmetric");
    };
    check_sym(e.constant);
    for (const auto& [id, A] : e.terms)
    {
        if (id < 0 || id >= num_scalars_)
            throw Error(Errc::invalid_argument, "LMI references undeclared variable " + std::to_string(id));
        if (A.rows() != n || A.cols() != n)
            throw Error(Errc::dimension_mismatch, "LMI coefficient size mismatch");
        check_sym(A);
    }
}

ConstraintId SdpProblem::add_equality(LinExpr expr, std::string label)
{
    check_refs(expr);
    Constraint c;
    c.label = std::move(label);
    c.kind = ConstraintKind::equality;
    c.linear = std::move(expr);
    constraints_.push_back(std::move(c));
    return ConstraintId{static_cast<int>(constraints_.size()) - 1};
}

ConstraintId SdpProblem::add_inequality(LinExpr expr, std::string label)
{
    check_refs(expr);
    Constraint c;
    c.label = std::move(label);
    c.kind = ConstraintKind::inequality;
    c.linear = std::move(expr);
    constraints_.push_back(std::move(c));
    return ConstraintId{static_cast<int>(constraints_.size()) - 1};
}

ConstraintId SdpProblem::add_lmi(SymAffine expr, std::string label)
{
    check_refs(expr);
    Constraint c;
    c.label = std::move(label);
    c.kind = ConstraintKind::lmi;
    c.matrix = std::move(expr);
    constraints_.push_back(std::move(c));
    return ConstraintId{static_cast<int>(constraints_.size()) - 1};
}

ConstraintId SdpProblem::add_lmi(const HermAffine& expr, std::string label)
{
    const auto id = add_lmi(lower(expr), std::move(label));
    constraints_.back().complex_size = expr.size();
    return id;
}

void SdpProblem::set_objective(Sense sense, LinExpr objective)
{
    check_refs(objective);
    sense_ = sense;
    objective_ = std::move(objective);
}

void dump(std::ostream& os, const SdpProblem& problem)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "scalars " << problem.num_scalars() << '\n';
    for (const auto& v : problem.variables())
    {
        os << "var " << v.name << ' ';
        switch (v.kind)
        {
        case VarKind::free_scalar: os << "free"; break;
        case VarKind::nonneg_scalar: os << "nonneg"; break;
        case VarKind::psd_block: os << "psd(" << v.n << ')'; break;
        case VarKind::hermitian_psd_block: os << "hermitian-psd(" << v.n << ')'; break;
        }
        for (int s : v.scalars)
            os << ' ' << s;
        os << '\n';
    }
    auto print_lin = [&os](const LinExpr& e) {
        os << e.constant;
        for (const auto& [id, c] : e.terms)
            os << " + " << c << "*x" << id;
        os << '\n';
    };
    os << (problem.sense() == Sense::minimize ? "minimize " : "maximize ");
    print_lin(problem.objective());
    for (std::size_t k = 0; k < problem.constraints().size(); ++k)
    {
        const auto& c = problem.constraints()[k];
        os << "constraint " << k << " \"" << c.label << "\" ";
        if (c.kind == ConstraintKind::lmi)
        {
            const auto n = c.matrix.size();
            os << "lmi " << n << '\n';
            auto print_mat = [&os, n](const char* tag, const Eigen::MatrixXd& A) {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        if (A(i, j) != 0.0)
                            os << "  " << tag << ' ' << i << ' ' << j << ' ' << A(i, j) << '\n';
            };
            print_mat("c", c.matrix.constant);
            for (const auto& [id, A] : c.matrix.terms)
            {
                os << " x" << id << '\n';
                print_mat("a", A);
            }
        }
        else
        {
            os << (c.kind == ConstraintKind::equality ? "eq " : "ge ");
            print_lin(c.linear);
        }
    }
    os.flags(flags);
    os.precision(prec);
}

const char* to_string(SolveStatus s) noexcept
{
    switch (s)
    {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

double SdpSolution::value(const LinExpr& e) const
{
    double v = e.constant;
    for (const auto& [id, c] : e.terms)
        v += c * x.at(id);
    return v;
}

Eigen::MatrixXd SdpSolution::value(const SymmetricVar& v) const
{
    Eigen::MatrixXd X(v.n, v.n);
    int k = 0;
    for (int i = 0; i < v.n; ++i)
        for (int j = i; j < v.n; ++j)
        {
            const double val = x.at(v.ids[k++]);
            X(i, j) = val;
            X(j, i) = val;
        }
    // off-diagonal basis elements are E_ij + E_ji, so parameters are entries
    return X;
}

CMatrix SdpSolution::value(const HermitianVar& v) const
{
    CMatrix H = CMatrix::Zero(v.n, v.n);
    for (int p = 0; p < hermitian_dim(v.n); ++p)
        H += x.at(v.ids[p]) * hermitian_basis(v.n, p);
    return H;
}

CMatrix SdpSolution::hermitian_dual(ConstraintId c) const
{
    return dual_from_embedding(duals.at(c.id));
}

SolverFailure::SolverFailure(const std::string& what, SolverDiagnostics diag)
    : Error(Errc::solver_failure, what + " [" + diag.message + ", iterations " + std::to_string(diag.iterations) +
                                      ", residuals " + std::to_string(diag.primal_residual) + "/" +
                                      std::to_string(diag.dual_residual) + ", gap " + std::to_string(diag.gap) + "]"),
      diag_(std::move(diag))
{
}

void require_optimal(const SdpSolution& solution, const std::string& context)
{
    if (!solution.optimal())
        throw SolverFailure(context + ": status " + to_string(solution.status), solution.diagnostics);
}

const SdpBackend& default_backend()
{
    static const InteriorPointBackend backend;
    return backend;
}

SdpSolution solve(const SdpProblem& problem, const Tolerances& tol)
{
    return default_backend().solve(problem, tol);
}

} // namespace secrecy::conic
