#include "secrecy/sim.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace secrecy;

TEST_CASE("gen_channels is deterministic given the generator state")
{
    std::mt19937_64 a(99), b(99);
    const auto x = gen_channels(4, 3, a);
    const auto y = gen_channels(4, 3, b);
    CHECK(x.h == y.h);
    REQUIRE(x.g_bar.size() == 3);
    for (int k = 0; k < 3; ++k)
        CHECK(x.g_bar[k] == y.g_bar[k]);

    const auto r1 = trial_rng(7, 3);
    const auto r2 = trial_rng(7, 3);
    CHECK(r1 == r2);
    CHECK_FALSE(trial_rng(7, 3) == trial_rng(7, 4));
    CHECK_FALSE(trial_rng(7, 3) == trial_rng(8, 3));
}

TEST_CASE("gen_channels entries are CN(0, 1)")
{
    std::mt19937_64 rng(101);
    const int draws = 100000;
    Complex mean = 0.0;
    double power = 0.0;
    double re2 = 0.0;
    double norm2 = 0.0;
    for (int s = 0; s < draws / 4; ++s)
    {
        const auto ch = gen_channels(4, 1, rng);
        for (int i = 0; i < 4; ++i)
        {
            mean += ch.h(i);
            power += std::norm(ch.h(i));
            re2 += ch.h(i).real() * ch.h(i).real();
        }
        norm2 += ch.g_bar[0].squaredNorm();
    }
    mean /= draws;
    power /= draws;
    re2 /= draws;
    norm2 /= draws / 4;
    CHECK(std::abs(mean) <= 0.02);
    CHECK(power >= 0.98);
    CHECK(power <= 1.02);
    CHECK(re2 == doctest::Approx(0.5).epsilon(0.04));
    CHECK(norm2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("alpha_to_epsilon")
{
    CHECK(alpha_to_epsilon(0.1, 4) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(alpha_to_epsilon(0.0, 4) == 0.0);
    CHECK(alpha_to_epsilon(0.5, 1) == 0.5);
}

TEST_CASE("config validation")
{
    SweepConfig c;
    c.axis_values = {0.0, 10.0};
    CHECK_NOTHROW(validate(c));
    c.axis_values = {10.0, 0.0};
    CHECK_THROWS_AS(validate(c), Error);
    c.axis_values.clear();
    CHECK_THROWS_AS(validate(c), Error);
    c.axis_values = {0.0};
    c.trials = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c.trials = 1;
    c.methods.clear();
    CHECK_THROWS_AS(validate(c), Error);
    CHECK(parse_method("mrt") == Method::mrt);
    CHECK(parse_axis("alpha") == SweepAxis::alpha);
    CHECK_THROWS_AS((void)parse_method("zf"), Error);
}

TEST_CASE("make_instance maps the axes")
{
    std::mt19937_64 rng(103);
    const auto ch = gen_channels(4, 2, rng);
    SweepConfig c;
    c.sweep_axis = SweepAxis::power_db;
    c.fixed = 0.1;
    auto inst = make_instance(c, ch, 20.0);
    CHECK(inst.power == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(inst.eves[1].epsilon == doctest::Approx(0.2).epsilon(1e-15));

    c.sweep_axis = SweepAxis::alpha;
    c.fixed = 10.0;
    inst = make_instance(c, ch, 0.05);
    CHECK(inst.power == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(inst.eves[0].epsilon == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("MRT sweep on one trial reproduces its closed-form rate")
{
    SweepConfig c;
    c.nt = 2;
    c.K = 1;
    c.trials = 1;
    c.seed = 5;
    c.sweep_axis = SweepAxis::power_db;
    c.axis_values = {10.0};
    c.fixed = 0.0;
    c.methods = {Method::mrt};
    const auto res = run_sweep(c);
    REQUIRE(res.points.size() == 1);

    std::mt19937_64 rng = trial_rng(5, 0);
    const auto ch = gen_channels(2, 1, rng);
    const double P = 10.0;
    // eps = 0, W = P h h^H / |h|^2, Sigma = 0
    const double bob = std::log2(1.0 + P * ch.h.squaredNorm());
    const double eve = std::log2(1.0 + P * std::norm(ch.g_bar[0].dot(ch.h)) / ch.h.squaredNorm());
    CHECK(res.points[0].mean_rate == doctest::Approx(std::max(0.0, bob - eve)).epsilon(1e-8));
    CHECK(res.points[0].n_success == 1);
    CHECK(res.points[0].stderr_rate == 0.0);
}

TEST_CASE("paired sweep: dominance, reproducible CSV, threads do not matter")
{
    SweepConfig c;
    c.nt = 3;
    c.K = 2;
    c.trials = 6;
    c.seed = 11;
    c.sweep_axis = SweepAxis::power_db;
    c.axis_values = {5.0, 15.0};
    c.fixed = 0.1;
    c.methods = {Method::robust, Method::isotropic, Method::mrt};
    const auto a = run_sweep(c);
    SweepRunOptions par;
    par.threads = 3;
    const auto b = run_sweep(c, par);
    CHECK(to_csv(a) == to_csv(b));

    REQUIRE(a.points.size() == 6);
    const std::size_t per = c.methods.size();
    for (std::size_t i = 0; i < a.outcomes.size(); i += per)
    {
        REQUIRE(a.outcomes[i].method == Method::robust);
        CHECK(a.outcomes[i].ok);
        CHECK(a.outcomes[i].rate >= a.outcomes[i + 1].rate - 1e-6);
        CHECK(a.outcomes[i].rate >= a.outcomes[i + 2].rate - 1e-6);
    }

    const std::string csv = to_csv(a);
    CHECK(csv.rfind("axis_value,method,mean_rate,stderr,n_success,n_fail\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("too many failed trials abort the sweep")
{
    SweepConfig c;
    c.nt = 1;
    c.K = 1;
    c.trials = 3;
    c.sweep_axis = SweepAxis::alpha;
    c.axis_values = {0.1};
    c.fixed = 10.0;
    c.methods = {Method::isotropic}; // undefined for one antenna
    try
    {
        (void)run_sweep(c);
        FAIL("sweep with failing trials succeeded");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == Errc::numerical_failure);
    }
}
