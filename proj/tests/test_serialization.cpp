#include "secrecy/serialization.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <bit>
#include <cstdint>

using namespace secrecy;
using secrecy::testing::random_cvector;
using secrecy::testing::random_psd;

namespace
{

bool same_bits(double a, double b)
{
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const CMatrix& A, const CMatrix& B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols())
        return false;
    for (Eigen::Index i = 0; i < A.size(); ++i)
        if (!same_bits(A.data()[i].real(), B.data()[i].real()) || !same_bits(A.data()[i].imag(), B.data()[i].imag()))
            return false;
    return true;
}

template <class T>
T round_trip(const T& x)
{
    return Json::parse(Json(x).dump()).get<T>();
}

ProblemInstance random_instance(std::mt19937_64& rng, int n, int K)
{
    ProblemInstance inst;
    inst.h = random_cvector(n, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < K; ++k)
        inst.eves.push_back({random_cvector(n, rng), u(rng)});
    inst.power = std::exp(3.0 * u(rng));
    return inst;
}

} // namespace

TEST_CASE("instance round trip is bit exact")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t)
    {
        const auto inst = random_instance(rng, 1 + t % 4, 1 + t % 3);
        const auto back = round_trip(inst);
        REQUIRE(back.eves.size() == inst.eves.size());
        CHECK(same_bits(back.h, inst.h));
        CHECK(same_bits(back.power, inst.power));
        for (std::size_t k = 0; k < inst.eves.size(); ++k)
        {
            CHECK(same_bits(back.eves[k].g_bar, inst.eves[k].g_bar));
            CHECK(same_bits(back.eves[k].epsilon, inst.eves[k].epsilon));
        }
    }
}

TEST_CASE("instance schema with power in dB")
{
    const auto j = Json::parse(R"({"nt": 2, "h": [[1, 0], [0, 0]],
        "eves": [{"g_bar": [[0, 0], [1, 0]], "epsilon": 0.1}], "power_db": 10})");
    const auto inst = j.get<ProblemInstance>();
    CHECK(inst.nt() == 2);
    CHECK(inst.power == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(inst.eves[0].epsilon == 0.1);
    CHECK(inst.eves[0].g_bar(1) == Complex(1.0, 0.0));

    const auto emitted = Json(inst);
    CHECK(emitted.at("power_db").get<double>() == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(emitted.at("nt").get<int>() == 2);
}

TEST_CASE("malformed instances are rejected")
{
    CHECK_THROWS_AS(Json::parse(R"({"h": [[1, 0]], "eves": []})").get<ProblemInstance>(), Error);
    CHECK_THROWS_AS(Json::parse(R"({"nt": 3, "h": [[1, 0]], "eves": [], "power": 1})").get<ProblemInstance>(),
                    Error);
    CHECK_THROWS_AS(Json::parse(R"({"h": [[1, 0, 2]], "eves": [], "power": 1})").get<ProblemInstance>(), Error);
    CHECK_THROWS_AS((void)matrix_from_json(Json::parse(R"({"re": [[1, 2]], "im": [[1]]})")), Error);
}

TEST_CASE("design round trip is bit exact, with and without beam")
{
    std::mt19937_64 rng(13);
    const CVector w = random_cvector(3, rng);
    TransmitDesign d{w * w.adjoint(), random_psd(3, rng, 2.0), w};
    auto back = round_trip(d);
    CHECK(same_bits(back.W, d.W));
    CHECK(same_bits(back.Sigma, d.Sigma));
    REQUIRE(back.beam.has_value());
    CHECK(same_bits(*back.beam, w));

    d.beam.reset();
    back = round_trip(d);
    CHECK_FALSE(back.beam.has_value());
}

TEST_CASE("report, trace and result round trips")
{
    std::mt19937_64 rng(17);
    SecrecyResult r;
    const CVector w = random_cvector(2, rng);
    r.design = {w * w.adjoint(), random_psd(2, rng, 0.3), w};
    r.rate_worst_case = 1.2345678901234567;
    r.beta_star = 3.0000000000000004;
    r.lambda_ratio = 1e-13;
    r.per_eve.push_back({0, 1.75, random_cvector(2, rng), 2.5, 1.6});
    r.per_eve.push_back({1, 1.5, random_cvector(2, rng), 2.5, 1.9});
    r.trace.samples.push_back({1.0, 2.0, true, SampleStage::grid, {}});
    r.trace.samples.push_back({1.5, 0.0, false, SampleStage::golden, "failed"});
    r.trace.brackets.emplace_back(1.0, 2.0);
    r.trace.beta_star = 1.0;
    r.trace.phi_star = 2.0;

    const auto back = round_trip(r);
    CHECK(same_bits(back.rate_worst_case, r.rate_worst_case));
    CHECK(same_bits(back.beta_star, r.beta_star));
    REQUIRE(back.lambda_ratio.has_value());
    CHECK(same_bits(*back.lambda_ratio, *r.lambda_ratio));
    CHECK(same_bits(back.design.W, r.design.W));
    REQUIRE(back.per_eve.size() == 2);
    CHECK(back.per_eve[1].k == 1);
    CHECK(same_bits(back.per_eve[1].worst_g, r.per_eve[1].worst_g));
    CHECK(same_bits(back.per_eve[0].secrecy_term, 1.6));
    REQUIRE(back.trace.samples.size() == 2);
    CHECK(back.trace.samples[1].stage == SampleStage::golden);
    CHECK_FALSE(back.trace.samples[1].ok);
    CHECK(back.trace.samples[1].message == "failed");
    CHECK(back.trace.brackets.size() == 1);

    // a result is also a design file
    const auto design = Json(r).get<TransmitDesign>();
    CHECK(same_bits(design.Sigma, r.design.Sigma));

    SecrecyResult no_ratio = r;
    no_ratio.lambda_ratio.reset();
    CHECK_FALSE(round_trip(no_ratio).lambda_ratio.has_value());
}

TEST_CASE("design evaluation round trip")
{
    DesignEvaluation e;
    e.rate = 0.1 + 0.2;
    e.reports.push_back({0, 1.1, CVector::Ones(2), 0.7, 0.6});
    const auto back = round_trip(e);
    CHECK(same_bits(back.rate, e.rate));
    CHECK(back.reports.size() == 1);
}

TEST_CASE("sweep config round trip and defaults")
{
    SweepConfig c;
    c.nt = 4;
    c.K = 1;
    c.trials = 7;
    c.seed = 0xdeadbeefcafef00dULL;
    c.sweep_axis = SweepAxis::alpha;
    c.axis_values = {0.02, 0.1, 0.2};
    c.fixed = 20.0;
    c.methods = {Method::robust, Method::mrt};
    const auto back = round_trip(c);
    CHECK(back.seed == c.seed);
    CHECK(back.sweep_axis == SweepAxis::alpha);
    CHECK(back.axis_values == c.axis_values);
    CHECK(back.methods == c.methods);
    CHECK(same_bits(back.fixed, 20.0));

    const auto minimal = Json::parse(R"({"sweep_axis": "power_db", "axis_values": [0, 10], "fixed": 0.1})")
                             .get<SweepConfig>();
    CHECK(minimal.trials == 200);
    CHECK(minimal.methods.size() == 2);
    CHECK_THROWS_AS(Json::parse(R"({"sweep_axis": "snr", "axis_values": [0], "fixed": 0.1})").get<SweepConfig>(),
                    Error);
}
