#include "secrecy/conic/sdp.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace secrecy;
using namespace secrecy::conic;

namespace
{

CMatrix random_hermitian(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    CMatrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = Complex(nd(rng), nd(rng));
    return hermitian_part(A);
}

Eigen::VectorXd sorted(Eigen::VectorXd v)
{
    std::sort(v.data(), v.data() + v.size());
    return v;
}

} // namespace

TEST_CASE("embed_complex of the identity is the real identity")
{
    const Eigen::MatrixXd E = embed_complex(CMatrix::Identity(2, 2));
    CHECK(E.isApprox(Eigen::MatrixXd::Identity(4, 4)));
}

TEST_CASE("embed_complex of [[0,i],[-i,0]] has eigenvalues -1,-1,1,1")
{
    CMatrix H(2, 2);
    H << 0.0, Complex(0, 1), Complex(0, -1), 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(embed_complex(H));
    const Eigen::Vector4d expected(-1, -1, 1, 1);
    CHECK((es.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embedding spectrum is the Hermitian spectrum with doubled multiplicity")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial)
    {
        const CMatrix H = random_hermitian(3, rng);
        Eigen::SelfAdjointEigenSolver<CMatrix> ref(H);
        Eigen::VectorXd doubled(6);
        doubled << ref.eigenvalues(), ref.eigenvalues();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(embed_complex(H));
        CHECK((es.eigenvalues() - sorted(doubled)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("embed_complex is linear and rejects non-Hermitian input")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMatrix A = random_hermitian(4, rng);
        const CMatrix B = random_hermitian(4, rng);
        const Eigen::MatrixXd lhs = embed_complex(A + B);
        const Eigen::MatrixXd rhs = embed_complex(A) + embed_complex(B);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
    }
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS((void)embed_complex(bad), Error);
}

TEST_CASE("dual_from_embedding matches the trace pairing")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd X(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            X(i, j) = nd(rng);
    X = (X + X.transpose()).eval();
    const CMatrix Y = dual_from_embedding(X);
    for (int t = 0; t < 5; ++t)
    {
        const CMatrix H = random_hermitian(3, rng);
        CHECK((H * Y).trace().real() == doctest::Approx(embed_complex(H).cwiseProduct(X).sum()).epsilon(1e-12));
    }
}

TEST_CASE("hermitian parameterization round-trips")
{
    std::mt19937_64 rng(5);
    const CMatrix H = random_hermitian(4, rng);
    const Eigen::VectorXd p = hermitian_params(H);
    CMatrix R = CMatrix::Zero(4, 4);
    for (int k = 0; k < hermitian_dim(4); ++k)
        R += p(k) * hermitian_basis(4, k);
    CHECK((R - H).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("min Tr(X) s.t. X >= I has optimum X = I")
{
    SdpProblem prob;
    const auto X = prob.add_psd_block("X", 2);
    SymAffine shifted = X.expr();
    shifted.constant = -Eigen::MatrixXd::Identity(2, 2);
    prob.add_lmi(shifted, "X - I psd");
    LinExpr tr;
    tr.add(Var{X.ids[0]}, 1.0).add(Var{X.ids[2]}, 1.0);
    prob.set_objective(Sense::minimize, tr);

    const auto sol = solve(prob);
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-7));
    CHECK((sol.value(X) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(sol.dual_objective == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("max x s.t. x <= 3 with x nonnegative")
{
    SdpProblem prob;
    const Var x = prob.add_nonneg("x");
    prob.add_inequality(LinExpr(3.0).add(x, -1.0), "x <= 3");
    prob.set_objective(Sense::maximize, LinExpr{}.add(x, 1.0));
    const auto sol = solve(prob);
    REQUIRE(sol.optimal());
    CHECK(sol.value(x) == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-7));
    // multiplier of the active bound is the objective gradient
    CHECK(sol.scalar_dual(ConstraintId{1}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("linear equalities are eliminated and their multipliers recovered")
{
    SdpProblem prob;
    const Var x = prob.add_nonneg("x");
    const Var y = prob.add_nonneg("y");
    const auto eq = prob.add_equality(LinExpr(-1.0).add(x, 1.0).add(y, -1.0), "x - y = 1");
    prob.set_objective(Sense::minimize, LinExpr{}.add(x, 1.0).add(y, 1.0));
    const auto sol = solve(prob);
    REQUIRE(sol.optimal());
    CHECK(sol.value(x) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(sol.value(y)) < 1e-7);
    // maximize-form: -(x + y); stationarity in x gives nu = -1
    CHECK(sol.scalar_dual(eq) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("largest eigenvalue as an SDP matches the eigensolver")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMatrix A = hermitian_part(random_hermitian(4, rng));
        SdpProblem prob;
        const Var t = prob.add_free("t");
        HermAffine lmi(4);
        lmi.constant = -A;
        lmi.add(t, CMatrix::Identity(4, 4));
        const auto c = prob.add_lmi(lmi, "tI - A psd");
        prob.set_objective(Sense::minimize, LinExpr{}.add(t, 1.0));
        const auto sol = solve(prob);
        REQUIRE(sol.optimal());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
        CHECK(sol.value(t) == doctest::Approx(es.eigenvalues()(3)).epsilon(1e-7));
        // dual is the projector on the top eigenvector, with unit trace
        const CMatrix Y = sol.hermitian_dual(c);
        CHECK(Y.trace().real() == doctest::Approx(1.0).epsilon(1e-6));
        const CVector u = es.eigenvectors().col(3);
        CHECK((Y - u * u.adjoint()).norm() < 1e-5);
    }
}

TEST_CASE("weak duality holds on random feasible SDPs")
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial)
    {
        // maximize <B, X> s.t. Tr X <= 1, X psd, X_00 >= 0.1
        SdpProblem prob;
        const auto X = prob.add_hermitian_psd("X", 3);
        const CMatrix B = random_hermitian(3, rng);
        prob.add_inequality(LinExpr(1.0) + -1.0 * X.linear(CMatrix::Identity(3, 3)), "trace");
        CMatrix e00 = CMatrix::Zero(3, 3);
        e00(0, 0) = 1.0;
        prob.add_inequality(LinExpr(-0.1) + X.linear(e00), "corner");
        prob.set_objective(Sense::maximize, X.linear(B));
        const auto sol = solve(prob);
        REQUIRE(sol.optimal());
        CHECK(sol.objective <= sol.dual_objective + 1e-7 * (1.0 + std::abs(sol.objective)));
        CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-7 * (1.0 + std::abs(sol.objective)));
        CHECK(min_eigenvalue(sol.value(X)) > -1e-7);
        CHECK(sol.diagnostics.primal_residual <= 1e-7);
        CHECK(sol.diagnostics.dual_residual <= 1e-7);
    }
}

TEST_CASE("certified infeasibility and unboundedness")
{
    SUBCASE("contradictory bounds")
    {
        SdpProblem prob;
        const Var x = prob.add_free("x");
        prob.add_inequality(LinExpr(-1.0).add(x, 1.0), "x >= 1");
        prob.add_inequality(LinExpr{}.add(x, -1.0), "x <= 0");
        prob.set_objective(Sense::minimize, LinExpr{}.add(x, 1.0));
        CHECK(solve(prob).status == SolveStatus::infeasible);
    }
    SUBCASE("infeasible LMI")
    {
        SdpProblem prob;
        const Var x = prob.add_free("x");
        SymAffine lmi(2);
        lmi.constant << 0.0, 1.0, 1.0, 0.0;
        Eigen::MatrixXd D(2, 2);
        D << 1.0, 0.0, 0.0, -1.0;
        lmi.add(x, D);
        prob.add_lmi(lmi, "[[x,1],[1,-x]] psd");
        prob.set_objective(Sense::minimize, LinExpr{}.add(x, 1.0));
        CHECK(solve(prob).status == SolveStatus::infeasible);
    }
    SUBCASE("inconsistent equalities")
    {
        SdpProblem prob;
        const Var x = prob.add_free("x");
        prob.add_equality(LinExpr(-1.0).add(x, 1.0));
        prob.add_equality(LinExpr(-2.0).add(x, 1.0));
        prob.set_objective(Sense::minimize, LinExpr{}.add(x, 1.0));
        CHECK(solve(prob).status == SolveStatus::infeasible);
    }
    SUBCASE("unbounded objective")
    {
        SdpProblem prob;
        const Var x = prob.add_nonneg("x");
        prob.set_objective(Sense::maximize, LinExpr{}.add(x, 1.0));
        CHECK(solve(prob).status == SolveStatus::unbounded);
    }
}

TEST_CASE("require_optimal raises SolverFailure with diagnostics")
{
    SdpSolution sol;
    sol.status = SolveStatus::numerical_failure;
    sol.diagnostics.message = "stalled";
    CHECK_THROWS_AS(require_optimal(sol, "test"), SolverFailure);
}

TEST_CASE("problem builder validates references and symmetry")
{
    SdpProblem prob;
    CHECK_THROWS_AS(prob.add_inequality(LinExpr{}.add(Var{3}, 1.0)), Error);
    const Var x = prob.add_free("x");
    SymAffine lmi(2);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
    asym(0, 1) = 1.0;
    lmi.add(x, asym);
    CHECK_THROWS_AS(prob.add_lmi(lmi), Error);
}

TEST_CASE("debug dump lists blocks and coefficients")
{
    SdpProblem prob;
    const auto X = prob.add_psd_block("X", 2);
    prob.set_objective(Sense::minimize, LinExpr{}.add(Var{X.ids[0]}, 1.0));
    std::ostringstream os;
    dump(os, prob);
    const std::string text = os.str();
    CHECK(text.find("var X psd(2)") != std::string::npos);
    CHECK(text.find("lmi 2") != std::string::npos);
    CHECK(text.find("minimize") != std::string::npos);
}
