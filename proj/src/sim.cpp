#include "secrecy/sim.hpp"

#include "secrecy/baselines.hpp"
#include "secrecy/worst_case.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace secrecy
{

const char* to_string(SweepAxis axis) noexcept
{
    return axis == SweepAxis::power_db ? "power_db" : "alpha";
}

const char* to_string(Method method) noexcept
{
    switch (method)
    {
    case Method::robust: return "robust";
    case Method::isotropic: return "isotropic";
    case Method::mrt: return "mrt";
    }
    return "unknown";
}

SweepAxis parse_axis(const std::string& name)
{
    if (name == "power_db")
        return SweepAxis::power_db;
    if (name == "alpha")
        return SweepAxis::alpha;
    throw Error(Errc::invalid_argument, "unknown sweep axis '" + name + "'");
}

Method parse_method(const std::string& name)
{
    for (Method m : {Method::robust, Method::isotropic, Method::mrt})
        if (name == to_string(m))
            return m;
    throw Error(Errc::invalid_argument, "unknown method '" + name + "'");
}

void validate(const SweepConfig& config)
{
    if (config.nt < 1 || config.K < 1)
        throw Error(Errc::invalid_argument, "sweep: nt and K must be >= 1");
    if (config.trials < 1)
        throw Error(Errc::invalid_argument, "sweep: trials must be >= 1");
    if (config.axis_values.empty())
        throw Error(Errc::invalid_argument, "sweep: axis_values is empty");
    if (!std::is_sorted(config.axis_values.begin(), config.axis_values.end()))
        throw Error(Errc::invalid_argument, "sweep: axis_values must be sorted");
    if (config.methods.empty())
        throw Error(Errc::invalid_argument, "sweep: no methods selected");
    const bool alpha_swept = config.sweep_axis == SweepAxis::alpha;
    const double alpha_min = alpha_swept ? config.axis_values.front() : config.fixed;
    if (!(alpha_min >= 0.0))
        throw Error(Errc::invalid_argument, "sweep: alpha must be >= 0");
}

Channels gen_channels(int nt, int K, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    auto draw = [&] {
        CVector v(nt);
        for (int i = 0; i < nt; ++i)
        {
            const double re = nd(rng);
            const double im = nd(rng);
            v(i) = Complex(re, im);
        }
        return v;
    };
    Channels ch;
    ch.h = draw();
    for (int k = 0; k < K; ++k)
        ch.g_bar.push_back(draw());
    return ch;
}

double alpha_to_epsilon(double alpha, int nt)
{
    return alpha * std::sqrt(static_cast<double>(nt));
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    // splitmix64 finalizer over the (seed, trial) counter
    std::uint64_t z = seed + (trial + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

ProblemInstance make_instance(const SweepConfig& config, const Channels& ch, double axis_value)
{
    const double power_db = config.sweep_axis == SweepAxis::power_db ? axis_value : config.fixed;
    const double alpha = config.sweep_axis == SweepAxis::alpha ? axis_value : config.fixed;
    ProblemInstance inst;
    inst.h = ch.h;
    inst.power = db_to_linear(power_db);
    const double eps = alpha_to_epsilon(alpha, config.nt);
    for (const auto& g : ch.g_bar)
        inst.eves.push_back({g, eps});
    return inst;
}

namespace
{

double rate_of(Method method, const ProblemInstance& inst, const SearchOptions& search)
{
    switch (method)
    {
    case Method::robust: {
        SearchOptions opt = search;
        opt.threads = 1;
        return evaluate_design(inst, solve_srm(inst, opt).design).rate;
    }
    case Method::isotropic: return evaluate_design(inst, isotropic_an(inst)).rate;
    case Method::mrt: return evaluate_design(inst, no_an_mrt(inst)).rate;
    }
    return 0.0;
}

} // namespace

SweepResult run_sweep(const SweepConfig& config, const SweepRunOptions& options)
{
    validate(config);
    const int n_axis = static_cast<int>(config.axis_values.size());
    const int n_methods = static_cast<int>(config.methods.size());
    const int per_trial = n_axis * n_methods;

    // outcome slot (a, t, m) = (a * trials + t) * n_methods + m
    SweepResult res;
    res.outcomes.resize(static_cast<std::size_t>(config.trials) * per_trial);

    std::atomic<int> next{0};
    std::atomic<int> done{0};
    auto worker = [&] {
        for (int t = next++; t < config.trials; t = next++)
        {
            std::mt19937_64 rng = trial_rng(config.seed, static_cast<std::uint64_t>(t));
            const Channels ch = gen_channels(config.nt, config.K, rng);
            for (int a = 0; a < n_axis; ++a)
            {
                const ProblemInstance inst = make_instance(config, ch, config.axis_values[a]);
                for (int m = 0; m < n_methods; ++m)
                {
                    TrialOutcome& o = res.outcomes[(static_cast<std::size_t>(a) * config.trials + t) * n_methods + m];
                    o.trial = t;
                    o.axis_value = config.axis_values[a];
                    o.method = config.methods[m];
                    try
                    {
                        o.rate = rate_of(o.method, inst, options.search);
                        o.ok = true;
                    }
                    catch (const std::exception& ex)
                    {
                        o.message = ex.what();
                    }
                }
            }
            const int d = ++done;
            if (options.progress)
                options.progress(d, config.trials);
        }
    };
    const int workers = std::clamp(options.threads, 1, config.trials);
    if (workers == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (int a = 0; a < n_axis; ++a)
        for (int m = 0; m < n_methods; ++m)
        {
            SweepPoint p;
            p.axis_value = config.axis_values[a];
            p.method = config.methods[m];
            double sum = 0.0;
            for (int t = 0; t < config.trials; ++t)
            {
                const auto& o = res.outcomes[(static_cast<std::size_t>(a) * config.trials + t) * n_methods + m];
                if (o.ok)
                {
                    ++p.n_success;
                    sum += o.rate;
                }
                else
                    ++p.n_fail;
            }
            if (p.n_success > 0)
                p.mean_rate = sum / p.n_success;
            if (p.n_success > 1)
            {
                double ss = 0.0;
                for (int t = 0; t < config.trials; ++t)
                {
                    const auto& o = res.outcomes[(static_cast<std::size_t>(a) * config.trials + t) * n_methods + m];
                    if (o.ok)
                        ss += (o.rate - p.mean_rate) * (o.rate - p.mean_rate);
                }
                p.stderr_rate = std::sqrt(ss / (p.n_success - 1) / p.n_success);
            }
            if (20 * p.n_fail > config.trials)
            {
                std::ostringstream msg;
                msg << "sweep: " << p.n_fail << " of " << config.trials << " trials failed for method "
                    << to_string(p.method) << " at " << to_string(config.sweep_axis) << " = " << p.axis_value;
                throw Error(Errc::numerical_failure, msg.str());
            }
            res.points.push_back(p);
        }
    return res;
}

std::string to_csv(const SweepResult& result)
{
    std::ostringstream os;
    os << "axis_value,method,mean_rate,stderr,n_success,n_fail\n";
    os << std::setprecision(17);
    for (const auto& p : result.points)
        os << p.axis_value << ',' << to_string(p.method) << ',' << p.mean_rate << ',' << p.stderr_rate << ','
           << p.n_success << ',' << p.n_fail << '\n';
    return os.str();
}

} // namespace secrecy
