#pragma once

// Monte Carlo sweeps over i.i.d. Rayleigh channels comparing the robust
// design against the fixed baselines.

#include "secrecy/robust_srm.hpp"
#include "secrecy/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace secrecy
{

enum class SweepAxis
{
    power_db,
    alpha,
};

enum class Method
{
    robust,
    isotropic,
    mrt,
};

[[nodiscard]] const char* to_string(SweepAxis axis) noexcept;
[[nodiscard]] const char* to_string(Method method) noexcept;
[[nodiscard]] SweepAxis parse_axis(const std::string& name);
[[nodiscard]] Method parse_method(const std::string& name);

/// Name of the per-trial generator, recorded next to every sweep output.
inline constexpr const char* rng_algorithm = "mt19937_64 seeded by splitmix64(seed, trial)";

struct SweepConfig
{
    int nt = 4;
    int K = 3;
    int trials = 200;
    std::uint64_t seed = 1;
    SweepAxis sweep_axis = SweepAxis::power_db;
    std::vector<double> axis_values;
    /// The parameter not being swept: alpha for a power sweep, power in dB otherwise.
    double fixed = 0.1;
    std::vector<Method> methods{Method::robust, Method::isotropic};
};

/// Throws Errc::invalid_argument unless trials >= 1, nt, K >= 1, and
/// axis_values is nonempty and sorted.
void validate(const SweepConfig& config);

struct Channels
{
    CVector h;
    std::vector<CVector> g_bar;
};

/// Entries CN(0, 1): real and imaginary parts independent N(0, 1/2).
[[nodiscard]] Channels gen_channels(int nt, int K, std::mt19937_64& rng);

/// epsilon = alpha sqrt(nt), the RMS channel norm under CN(0, 1) entries.
[[nodiscard]] double alpha_to_epsilon(double alpha, int nt);

/// Independent generator for one trial, a pure function of (seed, trial).
[[nodiscard]] std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Instance of the sweep at one axis value for the given channels.
[[nodiscard]] ProblemInstance make_instance(const SweepConfig& config, const Channels& ch, double axis_value);

struct TrialOutcome
{
    int trial = 0;
    double axis_value = 0.0;
    Method method = Method::robust;
    bool ok = false;
    double rate = 0.0; // worst-case secrecy rate from the oracle, bps/Hz
    std::string message;
};

struct SweepPoint
{
    double axis_value = 0.0;
    Method method = Method::robust;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    int n_success = 0;
    int n_fail = 0;
};

struct SweepResult
{
    std::vector<SweepPoint> points;     // axis value major, methods in config order
    std::vector<TrialOutcome> outcomes; // axis value, trial, method order
};

struct SweepRunOptions
{
    int threads = 1;
    SearchOptions search;
    /// Called after each finished trial with (done, total).
    std::function<void(int, int)> progress;
};

/// Draws channels once per trial and evaluates every method at every axis
/// value on them. Failed trials are excluded from the statistics; more than
/// 5% failures for any (axis value, method) throws Errc::numerical_failure.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config, const SweepRunOptions& options = {});

/// axis_value,method,mean_rate,stderr,n_success,n_fail with LF line endings.
[[nodiscard]] std::string to_csv(const SweepResult& result);

} // namespace secrecy
