// psmine: mine partial-solution catalogs, generate solutions from them,
// explain solutions and run the benchmark experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "psmine/baselines.hpp"
#include "psmine/benchmarks.hpp"
#include "psmine/generator.hpp"
#include "psmine/harness.hpp"
#include "psmine/miner.hpp"

using namespace psmine;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

PSCatalog load_catalog(const std::string& path) {
    if (std::filesystem::path(path).extension() == ".json") return catalog_from_json(read_file(path));
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_catalog_tsv(in);
}

std::vector<ProblemKind> parse_problem_list(const std::string& text) {
    std::vector<ProblemKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_problem_kind(item));
    return out;
}

struct ProblemOptions {
    std::string name = "rr";
    std::string spec_file;
    std::uint64_t seed = 0;

    BenchmarkProblem make() const {
        if (!spec_file.empty()) return BenchmarkProblem::from_json(read_file(spec_file));
        return BenchmarkProblem::standard(parse_problem_kind(name), seed);
    }
};

void add_problem_options(CLI::App* cmd, ProblemOptions& opts) {
    cmd->add_option("--problem", opts.name, "rr, rro or trap")->capture_default_str();
    cmd->add_option("--problem-spec", opts.spec_file, "problem JSON written by `psmine problem`");
    cmd->add_option("--problem-seed", opts.seed, "seed for the position shuffle / RRO groups")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial solution mining for explainable combinatorial optimization"};
    app.require_subcommand(1);

    // problem
    ProblemOptions problem_opts;
    std::string problem_out;
    auto* problem_cmd = app.add_subcommand("problem", "Write a benchmark instance as JSON");
    add_problem_options(problem_cmd, problem_opts);
    problem_cmd->add_option("--out", problem_out, "output file (default stdout)");

    // mine
    ProblemOptions mine_problem;
    MinerConfig miner;
    std::string variant = "specialization";
    std::size_t ref_size = 10000;
    std::uint64_t ref_seed = 1;
    bool no_archive = false, stop_on_targets = false;
    std::string catalog_out, catalog_json, mine_problem_out;
    auto* mine_cmd = app.add_subcommand("mine", "Mine a catalog from a uniform random reference population");
    add_problem_options(mine_cmd, mine_problem);
    mine_cmd->add_option("--ref-size", ref_size, "reference population size")->capture_default_str();
    mine_cmd->add_option("--ref-seed", ref_seed, "seed for the reference population")->capture_default_str();
    mine_cmd->add_option("--budget", miner.eval_budget, "aggregate-score evaluations")->capture_default_str();
    mine_cmd->add_option("--variant", variant, "simplification, specialization or full")->capture_default_str();
    mine_cmd->add_option("--pop", miner.population_size, "miner population size")->capture_default_str();
    mine_cmd->add_option("--qty", miner.qty_ret, "catalog size")->capture_default_str();
    mine_cmd->add_option("--selected", miner.selected_count, "parents per generation (0 = pop/3)");
    mine_cmd->add_option("--seed", miner.rng_seed, "miner seed")->capture_default_str();
    mine_cmd->add_flag("--no-archive", no_archive, "disable the exclusion archive");
    mine_cmd->add_flag("--stop-on-targets", stop_on_targets, "stop once every target PS has been found");
    mine_cmd->add_option("--out", catalog_out, "catalog TSV (default stdout)");
    mine_cmd->add_option("--json", catalog_json, "also write the catalog as JSON");
    mine_cmd->add_option("--problem-out", mine_problem_out, "write the problem instance as JSON");

    // generate
    std::string gen_catalog, gen_problem, gen_out;
    std::size_t gen_count = 10, gen_n = 0;
    GeneratorConfig gen_cfg;
    auto* gen_cmd = app.add_subcommand("generate", "Pick-and-merge full solutions from a catalog");
    gen_cmd->add_option("--catalog", gen_catalog, "catalog TSV or JSON")->required();
    gen_cmd->add_option("--count", gen_count, "number of solutions")->capture_default_str();
    gen_cmd->add_option("--seed", gen_cfg.rng_seed, "sampling seed")->capture_default_str();
    gen_cmd->add_option("--merge-limit", gen_cfg.merge_limit, "merges per solution (0 = ceil(sqrt(n)))");
    gen_cmd->add_option("--n", gen_n, "solution length, needed when the catalog is empty");
    gen_cmd->add_option("--problem-spec", gen_problem, "problem JSON; adds fitness and optimum columns");
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    // explain
    std::string exp_catalog, exp_problem, exp_solution;
    auto* explain_cmd = app.add_subcommand("explain", "Global or local explanations from a catalog");
    explain_cmd->require_subcommand(1);
    auto* global_cmd = explain_cmd->add_subcommand("global", "Describe the catalog and its conflicts");
    global_cmd->add_option("--catalog", exp_catalog, "catalog TSV or JSON")->required();
    global_cmd->add_option("--problem-spec", exp_problem, "problem JSON used to mark targets");
    auto* local_cmd = explain_cmd->add_subcommand("local", "List the catalog entries a solution contains");
    local_cmd->add_option("--catalog", exp_catalog, "catalog TSV or JSON")->required();
    local_cmd->add_option("--solution", exp_solution, "full solution, e.g. 0110")->required();

    // bench
    std::string bench_problems = "rr,rro,trap", out_dir = ".";
    std::size_t runs = 0, threads = 0, bench_ref = 0, bench_budget = 0;
    std::uint64_t base_seed = 0;
    bool quick = false;
    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment grid: t1, t2 or t3");
    bench_cmd->require_subcommand(1);
    std::vector<CLI::App*> bench_subs;
    for (const char* name : {"t1", "t2", "t3"}) {
        auto* sub = bench_cmd->add_subcommand(name, std::string("Experiment ") + name);
        sub->add_option("--runs", runs, "runs per cell (default 100, 20 with --quick)");
        sub->add_option("--seed", base_seed, "base seed")->capture_default_str();
        sub->add_option("--problems", bench_problems, "comma-separated problem list")->capture_default_str();
        sub->add_option("--out-dir", out_dir, "directory for <exp>.csv and <exp>.md")->capture_default_str();
        sub->add_option("--threads", threads, "worker threads (default PSMINE_THREADS or all cores)");
        sub->add_option("--ref-size", bench_ref, "reference population size for t1");
        sub->add_option("--budget", bench_budget, "aggregate-score budget for t1/t2");
        sub->add_flag("--quick", quick, "reduced grid for smoke runs");
        bench_subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*problem_cmd) {
            const auto json = problem_opts.make().to_json() + "\n";
            if (problem_out.empty())
                std::cout << json;
            else
                write_file(problem_out, json);
        } else if (*mine_cmd) {
            const auto problem = mine_problem.make();
            Rng rng(ref_seed);
            const auto reference = random_reference_population(problem, ref_size, rng);
            miner.variant = parse_local_search(variant);
            miner.use_archive = !no_archive;
            const auto stop = stop_on_targets ? StoppingRule::all_targets(problem.targets()) : StoppingRule::budget_only();
            const auto catalog = mine(miner, reference, stop);
            if (catalog_out.empty()) {
                write_catalog_tsv(std::cout, catalog);
            } else {
                std::ofstream out(catalog_out);
                write_catalog_tsv(out, catalog);
            }
            if (!catalog_json.empty()) write_file(catalog_json, catalog_to_json(catalog) + "\n");
            if (!mine_problem_out.empty()) write_file(mine_problem_out, problem.to_json() + "\n");
            std::cerr << "evaluations used: " << catalog.evals_used << ", targets found: "
                      << (catalog_contains_all_targets(catalog, problem) ? "all" : "not all") << '\n';
        } else if (*gen_cmd) {
            const auto catalog = load_catalog(gen_catalog);
            std::optional<BenchmarkProblem> problem;
            if (!gen_problem.empty()) problem = BenchmarkProblem::from_json(read_file(gen_problem));
            std::size_t n = gen_n;
            if (problem) n = problem->space().size();
            if (n == 0 && !catalog.entries.empty()) n = catalog.entries.front().ps.size();
            if (n == 0) throw ContractViolation("cannot infer solution length: pass --n or --problem-spec");
            const auto space = problem ? problem->space() : SearchSpace::binary(n);
            const auto solutions = generate(catalog.entries, space, gen_cfg, gen_count);
            std::ostringstream out;
            for (const auto& x : solutions) {
                out << to_string(x);
                if (problem)
                    out << '\t' << format_real(problem->fitness(x)) << '\t'
                        << (problem->is_global_optimum(x) ? "optimum" : "-");
                out << '\n';
            }
            if (gen_out.empty())
                std::cout << out.str();
            else
                write_file(gen_out, out.str());
        } else if (*explain_cmd) {
            const auto catalog = load_catalog(exp_catalog);
            if (*global_cmd) {
                std::optional<BenchmarkProblem> problem;
                if (!exp_problem.empty()) problem = BenchmarkProblem::from_json(read_file(exp_problem));
                std::cout << explain_global(catalog, problem ? &*problem : nullptr);
            } else {
                std::cout << explain_local(parse_full(exp_solution), catalog);
            }
        } else if (*bench_cmd) {
            Experiment experiment = Experiment::T1;
            for (auto* sub : bench_subs)
                if (*sub) experiment = parse_experiment(sub->get_name());
            auto spec = quick ? ExperimentSpec::quick(experiment) : ExperimentSpec{};
            spec.experiment = experiment;
            if (runs != 0) spec.runs_per_cell = runs;
            spec.base_seed = base_seed;
            spec.threads = threads;
            spec.problems = parse_problem_list(bench_problems);
            if (bench_ref != 0) spec.reference_size = bench_ref;
            if (bench_budget != 0) spec.psi_budget = bench_budget;

            const auto cells = run_experiment(spec, [](const CellResult& c) {
                std::cerr << "[" << c.key_value("problem") << "]";
                for (const auto& [k, v] : c.key)
                    if (k != "problem") std::cerr << ' ' << v;
                std::cerr << ": " << c.successes << "/" << c.runs << " (" << c.wall_seconds << " s)\n";
            });
            std::filesystem::create_directories(out_dir);
            const auto stem = std::filesystem::path(out_dir) / std::string(to_string(experiment));
            {
                std::ofstream csv(stem.string() + ".csv");
                write_results_csv(csv, cells);
                std::ofstream md(stem.string() + ".md");
                write_results_markdown(md, experiment, cells);
            }
            write_results_markdown(std::cout, experiment, cells);
            for (const auto& c : cells)
                if (!c.budget_ok) {
                    std::cerr << "budget exceeded in a cell\n";
                    return 3;
                }
        }
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
