#include "secrecy/baselines.hpp"
#include "secrecy/rank_one.hpp"
#include "secrecy/robust_srm.hpp"
#include "secrecy/serialization.hpp"
#include "secrecy/sim.hpp"
#include "secrecy/worst_case.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

using namespace secrecy;

namespace
{

void emit(const Json& j, const std::string& out)
{
    if (out.empty() || out == "-")
        std::cout << j.dump(2) << '\n';
    else
        write_json_file(out, j);
}

TransmitDesign baseline_design(const std::string& name, const ProblemInstance& inst)
{
    if (name == "isotropic")
        return isotropic_an(inst);
    if (name == "mrt")
        return no_an_mrt(inst);
    throw Error(Errc::invalid_argument, "unknown baseline '" + name + "'");
}

int default_threads()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Robust secrecy-rate transmit design with artificial noise"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Compute the robust design for one instance");
    std::string solve_instance, solve_out;
    int grid = 40;
    int golden = 30;
    std::optional<int> exhaustive;
    bool extract_beam = true;
    int solve_threads = default_threads();
    solve->add_option("--instance", solve_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--grid", grid, "Grid points of the beta scan")->check(CLI::Range(2, 100000));
    solve->add_option("--golden", golden, "Golden-section iterations")->check(CLI::NonNegativeNumber);
    solve->add_option("--exhaustive", exhaustive, "Use an N-point grid without refinement")
        ->check(CLI::Range(2, 100000));
    solve->add_flag("--extract-beam,!--no-extract-beam", extract_beam,
                    "Run power minimization and rank-one beam extraction (default on)");
    solve->add_option("--threads", solve_threads, "Worker threads for the grid scan")->check(CLI::PositiveNumber);
    solve->add_option("--out", solve_out, "Result JSON (stdout when omitted)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Worst-case secrecy rate of a given design");
    std::string eval_instance, eval_design, eval_baseline, eval_out;
    evaluate->add_option("--instance", eval_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    auto* design_opt = evaluate->add_option("--design", eval_design, "Design JSON (a solve result works)")
                           ->check(CLI::ExistingFile);
    auto* baseline_opt = evaluate->add_option("--baseline", eval_baseline, "Evaluate a reference design instead")
                             ->check(CLI::IsMember({"isotropic", "mrt"}));
    design_opt->excludes(baseline_opt);
    evaluate->add_option("--out", eval_out, "Report JSON (stdout when omitted)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep writing a CSV summary");
    std::string sim_config, sim_out, sim_baseline;
    std::optional<int> sim_trials;
    int sim_threads = default_threads();
    simulate->add_option("--config", sim_config, "Sweep configuration JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", sim_out, "CSV output")->required();
    simulate->add_option("--trials", sim_trials, "Override the trial count")->check(CLI::PositiveNumber);
    simulate->add_option("--baseline", sim_baseline, "Compare robust against this baseline only")
        ->check(CLI::IsMember({"isotropic", "mrt"}));
    simulate->add_option("--threads", sim_threads, "Worker threads over trials")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*solve)
        {
            const auto inst = read_json_file(solve_instance).get<ProblemInstance>();
            validate(inst);
            SearchOptions opt;
            opt.grid_points = grid;
            opt.golden_iterations = golden;
            opt.exhaustive = exhaustive;
            opt.threads = solve_threads;
            const SecrecyResult res = extract_beam ? full_pipeline(inst, opt) : solve_srm(inst, opt);
            emit(Json(res), solve_out);
        }
        else if (*evaluate)
        {
            const auto inst = read_json_file(eval_instance).get<ProblemInstance>();
            validate(inst);
            TransmitDesign design;
            if (!eval_baseline.empty())
                design = baseline_design(eval_baseline, inst);
            else if (!eval_design.empty())
                design = read_json_file(eval_design).get<TransmitDesign>();
            else
                throw Error(Errc::invalid_argument, "evaluate: pass --design or --baseline");
            check_design(design, inst.power);
            Json j = evaluate_design(inst, design);
            if (!eval_baseline.empty())
                j["baseline"] = eval_baseline;
            emit(j, eval_out);
        }
        else if (*simulate)
        {
            auto config = read_json_file(sim_config).get<SweepConfig>();
            if (sim_trials)
                config.trials = *sim_trials;
            if (!sim_baseline.empty())
                config.methods = {Method::robust, parse_method(sim_baseline)};
            SweepRunOptions run;
            run.threads = sim_threads;
            run.progress = [](int done, int total) {
                std::cerr << "\rtrials " << done << "/" << total << std::flush;
                if (done == total)
                    std::cerr << '\n';
            };
            const SweepResult res = run_sweep(config, run);
            {
                std::ofstream out(sim_out, std::ios::binary);
                if (!out)
                    throw Error(Errc::invalid_argument, "cannot write '" + sim_out + "'");
                out << to_csv(res);
            }
            Json meta = {{"config", config}, {"rng", rng_algorithm}, {"csv", sim_out}};
            write_json_file(sim_out + ".meta.json", meta);
        }
    }
    catch (const Error& ex)
    {
        std::cerr << "error [" << to_string(ex.code()) << "]: " << ex.what() << '\n';
        return 1;
    }
    catch (const std::exception& ex)
    {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
