#include "psmine/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "psmine/generator.hpp"
#include "psmine/parallel.hpp"
#include "psmine/random.hpp"

namespace psmine {

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::T1: return "t1";
        case Experiment::T2: return "t2";
        case Experiment::T3: return "t3";
    }
    return "?";
}

Experiment parse_experiment(std::string_view text) {
    if (text == "t1" || text == "T1") return Experiment::T1;
    if (text == "t2" || text == "T2") return Experiment::T2;
    if (text == "t3" || text == "T3") return Experiment::T3;
    throw ContractViolation("unknown experiment '" + std::string(text) + "'");
}

std::string MinerRow::label() const {
    switch (algorithm) {
        case Algorithm::PsGa: return "GA/" + std::to_string(population_size);
        case Algorithm::HillClimber: return "hill-climber";
        case Algorithm::Miner: break;
    }
    return std::string(to_string(variant)) + "/" + std::to_string(population_size) + (use_archive ? "/archive" : "/no-archive");
}

std::vector<MinerRow> full_miner_grid() {
    std::vector<MinerRow> rows;
    for (bool archive : {true, false})
        for (auto variant : {LocalSearch::SimplificationOnly, LocalSearch::SpecializationOnly, LocalSearch::FullLocal})
            for (std::size_t size : {50, 100, 150}) rows.push_back({MinerRow::Algorithm::Miner, variant, size, archive});
    for (std::size_t size : {50, 100, 150})
        rows.push_back({MinerRow::Algorithm::PsGa, LocalSearch::SpecializationOnly, size, false});
    rows.push_back({MinerRow::Algorithm::HillClimber, LocalSearch::SpecializationOnly, 0, false});
    return rows;
}

MinerConfig winning_miner_config() {
    MinerConfig cfg;
    cfg.population_size = 150;
    cfg.variant = LocalSearch::SpecializationOnly;
    cfg.use_archive = true;
    cfg.qty_ret = 50;
    return cfg;
}

ExperimentSpec ExperimentSpec::quick(Experiment experiment) {
    ExperimentSpec spec;
    spec.experiment = experiment;
    spec.runs_per_cell = 20;
    using A = MinerRow::Algorithm;
    spec.miner_rows = {{A::Miner, LocalSearch::SpecializationOnly, 150, true},
                       {A::Miner, LocalSearch::SpecializationOnly, 150, false},
                       {A::Miner, LocalSearch::SimplificationOnly, 50, true},
                       {A::PsGa, LocalSearch::SpecializationOnly, 50, false},
                       {A::HillClimber, LocalSearch::SpecializationOnly, 0, false}};
    spec.reference_sizes = {500, 2000, 10000};
    spec.generations = {0, 10};
    spec.budgets = {5000, 30000};
    spec.psi_shares_percent = {20, 50, 90};
    return spec;
}

void ExperimentSpec::validate() const {
    if (runs_per_cell < 1) throw ContractViolation("runs_per_cell must be >= 1");
    if (problems.empty()) throw ContractViolation("experiment needs at least one problem");
    for (auto p : psi_shares_percent)
        if (p == 0 || p >= 100) throw ContractViolation("F^psi share must be in (0, 100) percent");
}

std::string CellResult::key_value(std::string_view column) const {
    for (const auto& [k, v] : key)
        if (k == column) return v;
    return {};
}

std::size_t overshoot_allowance(const MinerRow& row, const SearchSpace& space, std::size_t qty_ret) {
    const std::size_t n = space.size();
    const auto card = static_cast<std::size_t>(space.max_cardinality());
    switch (row.algorithm) {
        case MinerRow::Algorithm::Miner: return row.population_size * (n + n * card);
        case MinerRow::Algorithm::PsGa: return 2 * row.population_size + qty_ret;
        case MinerRow::Algorithm::HillClimber: return 1 + n * card + qty_ret;
    }
    return 0;
}

namespace {

using Clock = std::chrono::steady_clock;

struct CellPlan {
    std::vector<std::pair<std::string, std::string>> key;
    std::string seed_key;
    std::function<RunOutcome(std::size_t run)> run;
    std::size_t f_budget = 0;
    std::size_t psi_budget = 0;
    std::size_t allowance = 0;
};

/// Runs every (cell, run) pair in parallel and aggregates per cell in order.
std::vector<CellResult> execute(const ExperimentSpec& spec, const std::vector<CellPlan>& plans,
                                const ProgressCallback& progress) {
    const std::size_t runs = spec.runs_per_cell;
    std::vector<RunOutcome> outcomes(plans.size() * runs);
    std::vector<double> seconds(plans.size() * runs, 0.0);
    std::vector<std::atomic<std::size_t>> remaining(plans.size());
    for (auto& r : remaining) r = runs;
    std::vector<CellResult> results(plans.size());
    std::mutex progress_mutex;

    auto aggregate = [&](std::size_t c) {
        CellResult& cell = results[c];
        cell.key = plans[c].key;
        cell.runs = runs;
        cell.f_budget = plans[c].f_budget;
        cell.psi_budget = plans[c].psi_budget;
        cell.psi_overshoot_allowance = plans[c].allowance;
        std::vector<double> evals;
        double fitness_sum = 0.0;
        for (std::size_t r = 0; r < runs; ++r) {
            const auto& o = outcomes[c * runs + r];
            cell.wall_seconds += seconds[c * runs + r];
            cell.max_f_evals = std::max(cell.max_f_evals, o.f_evals);
            cell.max_psi_evals = std::max(cell.max_psi_evals, o.psi_evals);
            cell.budget_ok = cell.budget_ok && o.budget_ok;
            fitness_sum += o.best_fitness;
            if (o.success) {
                ++cell.successes;
                evals.push_back(static_cast<double>(o.f_evals + o.psi_evals));
            }
        }
        cell.mean_best_fitness = fitness_sum / static_cast<double>(runs);
        if (!evals.empty()) {
            double mean = 0.0;
            for (double e : evals) mean += e;
            mean /= static_cast<double>(evals.size());
            double var = 0.0;
            for (double e : evals) var += (e - mean) * (e - mean);
            cell.mean_evals_to_success = mean;
            cell.stddev_evals_to_success = evals.size() > 1 ? std::sqrt(var / static_cast<double>(evals.size() - 1)) : 0.0;
        }
    };

    parallel_for(outcomes.size(), spec.threads, [&](std::size_t task) {
        const std::size_t c = task / runs;
        const std::size_t r = task % runs;
        const auto start = Clock::now();
        RunOutcome o = plans[c].run(r);
        seconds[task] = std::chrono::duration<double>(Clock::now() - start).count();
        o.budget_ok = o.budget_ok && o.f_evals <= plans[c].f_budget &&
                      o.psi_evals <= plans[c].psi_budget + plans[c].allowance;
        outcomes[task] = o;
        if (remaining[c].fetch_sub(1) == 1) {
            aggregate(c);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(results[c]);
            }
        }
    });
    return results;
}

std::uint64_t run_seed(const ExperimentSpec& spec, std::string_view key, std::size_t run) {
    return derive_seed(spec.base_seed, key, run);
}

/// Problem instance and reference population shared by every row of a T1 run.
struct T1Instance {
    BenchmarkProblem problem;
    EvaluatedPopulation reference;
};

T1Instance t1_instance(const ExperimentSpec& spec, ProblemKind kind, std::size_t run) {
    const auto seed = run_seed(spec, "t1/" + std::string(to_string(kind)), run);
    auto problem = BenchmarkProblem::standard(kind, derive_seed(seed, "problem"));
    Rng rng(derive_seed(seed, "reference"));
    auto reference = random_reference_population(problem, spec.reference_size, rng);
    return {std::move(problem), std::move(reference)};
}

PSCatalog run_row(const MinerRow& row, const EvaluatedPopulation& reference, std::size_t budget, std::uint64_t seed,
                  const StoppingRule& stop) {
    constexpr std::size_t kQtyRet = 50;
    switch (row.algorithm) {
        case MinerRow::Algorithm::Miner: {
            MinerConfig cfg;
            cfg.population_size = row.population_size;
            cfg.variant = row.variant;
            cfg.use_archive = row.use_archive;
            cfg.qty_ret = kQtyRet;
            cfg.eval_budget = budget;
            cfg.rng_seed = seed;
            return mine(cfg, reference, stop);
        }
        case MinerRow::Algorithm::PsGa: {
            GAConfig cfg;
            cfg.population_size = row.population_size;
            cfg.rng_seed = seed;
            return run_ps_ga(reference, cfg, kQtyRet, budget, stop);
        }
        case MinerRow::Algorithm::HillClimber: return run_ps_hill_climber(reference, kQtyRet, budget, seed, stop);
    }
    return {};
}

}  // namespace

std::vector<CellResult> run_t1(const ExperimentSpec& spec, const ProgressCallback& progress) {
    spec.validate();
    std::vector<CellPlan> plans;
    for (auto kind : spec.problems) {
        const auto space = BenchmarkProblem::standard(kind, 0).space();
        for (const auto& row : spec.miner_rows) {
            CellPlan plan;
            plan.key = {{"problem", std::string(to_string(kind))}, {"algorithm", row.label()}};
            plan.psi_budget = spec.psi_budget;
            plan.allowance = overshoot_allowance(row, space, 50);
            plan.run = [&spec, kind, row](std::size_t run) {
                const auto instance = t1_instance(spec, kind, run);
                const auto seed = derive_seed(run_seed(spec, "t1/" + std::string(to_string(kind)), run), row.label());
                const auto catalog = run_row(row, instance.reference, spec.psi_budget, seed,
                                             StoppingRule::all_targets(instance.problem.targets()));
                RunOutcome o;
                o.success = catalog_contains_all_targets(catalog, instance.problem);
                o.psi_evals = catalog.evals_used;
                return o;
            };
            plans.push_back(std::move(plan));
        }
    }
    return execute(spec, plans, progress);
}

std::vector<CellResult> run_t2(const ExperimentSpec& spec, const ProgressCallback& progress) {
    spec.validate();
    const MinerRow winner{MinerRow::Algorithm::Miner, LocalSearch::SpecializationOnly, 150, true};
    std::vector<CellPlan> plans;
    for (auto kind : spec.problems) {
        const auto space = BenchmarkProblem::standard(kind, 0).space();
        for (auto size : spec.reference_sizes)
            for (auto gens : spec.generations) {
                CellPlan plan;
                plan.key = {{"problem", std::string(to_string(kind))},
                            {"reference_size", std::to_string(size)},
                            {"generations", std::to_string(gens)}};
                plan.psi_budget = spec.psi_budget;
                plan.allowance = overshoot_allowance(winner, space, 50);
                plan.run = [&spec, kind, size, gens](std::size_t run) {
                    const auto seed = run_seed(spec, "t2/" + std::string(to_string(kind)) + "/" + std::to_string(size), run);
                    const auto problem = BenchmarkProblem::standard(kind, derive_seed(seed, "problem"));
                    GAConfig ga;
                    ga.rng_seed = derive_seed(seed, "reference");
                    const auto reference = evolve_reference_population(problem, size, gens, ga);
                    auto cfg = winning_miner_config();
                    cfg.eval_budget = spec.psi_budget;
                    cfg.rng_seed = derive_seed(seed, "miner/" + std::to_string(gens));
                    const auto catalog = mine(cfg, reference, StoppingRule::all_targets(problem.targets()));
                    RunOutcome o;
                    o.success = catalog_contains_all_targets(catalog, problem);
                    o.psi_evals = catalog.evals_used;
                    return o;
                };
                plans.push_back(std::move(plan));
            }
    }
    return execute(spec, plans, progress);
}

std::vector<CellResult> run_t3(const ExperimentSpec& spec, const ProgressCallback& progress) {
    spec.validate();
    const MinerRow winner{MinerRow::Algorithm::Miner, LocalSearch::SpecializationOnly, 150, true};
    std::vector<CellPlan> plans;
    for (auto kind : spec.problems) {
        const auto space = BenchmarkProblem::standard(kind, 0).space();
        const std::string pkey = "t3/" + std::string(to_string(kind));
        for (auto budget : spec.budgets) {
            for (auto share : spec.psi_shares_percent) {
                CellPlan plan;
                plan.key = {{"problem", std::string(to_string(kind))},
                            {"method", "P&M/" + std::to_string(share) + "%"},
                            {"budget", std::to_string(budget)}};
                plan.psi_budget = budget * share / 100;
                plan.f_budget = budget - plan.psi_budget;
                plan.allowance = overshoot_allowance(winner, space, 50);
                plan.run = [&spec, kind, budget, share, pkey, f_budget = plan.f_budget,
                            psi_budget = plan.psi_budget](std::size_t run) {
                    const auto seed = run_seed(spec, pkey + "/" + std::to_string(budget), run);
                    const auto problem = BenchmarkProblem::standard(kind, derive_seed(seed, "problem"));
                    CountingFitness fitness(problem, f_budget);
                    Rng rng(derive_seed(seed, "reference"));
                    const auto reference = random_reference_population(problem, f_budget, rng, &fitness);

                    auto cfg = winning_miner_config();
                    cfg.eval_budget = psi_budget;
                    cfg.rng_seed = derive_seed(seed, "miner/" + std::to_string(share));
                    const auto catalog = mine(cfg, reference);

                    GeneratorConfig gen;
                    gen.rng_seed = derive_seed(seed, "generate/" + std::to_string(share));
                    const auto solutions = generate(catalog.entries, problem.space(), gen, spec.generated_per_run);

                    RunOutcome o;
                    o.f_evals = fitness.used();
                    o.psi_evals = catalog.evals_used;
                    o.best_fitness = -std::numeric_limits<double>::infinity();
                    // the optimum predicate and reporting fitness are oracles, not budgeted evaluations
                    for (const auto& x : solutions) {
                        o.success = o.success || problem.is_global_optimum(x);
                        o.best_fitness = std::max(o.best_fitness, problem.fitness(x));
                    }
                    if (solutions.empty()) o.best_fitness = 0.0;
                    return o;
                };
                plans.push_back(std::move(plan));
            }
            if (!spec.include_baselines) continue;
            for (std::string method : {"GA", "UMDA"}) {
                CellPlan plan;
                plan.key = {{"problem", std::string(to_string(kind))}, {"method", method}, {"budget", std::to_string(budget)}};
                plan.f_budget = budget;
                plan.run = [&spec, kind, budget, method, pkey](std::size_t run) {
                    const auto seed = run_seed(spec, pkey + "/" + std::to_string(budget), run);
                    const auto problem = BenchmarkProblem::standard(kind, derive_seed(seed, "problem"));
                    RunResult result;
                    if (method == "GA") {
                        GAConfig cfg;
                        cfg.rng_seed = derive_seed(seed, "ga");
                        result = run_full_ga(problem, cfg, budget);
                    } else {
                        UMDAConfig cfg;
                        cfg.rng_seed = derive_seed(seed, "umda");
                        result = run_umda(problem, cfg, budget);
                    }
                    RunOutcome o;
                    o.f_evals = result.evals_used;
                    o.best_fitness = result.best_fitness;
                    o.success = result.best.size() != 0 && problem.is_global_optimum(result.best);
                    return o;
                };
                plans.push_back(std::move(plan));
            }
        }
    }
    return execute(spec, plans, progress);
}

std::vector<CellResult> run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress) {
    switch (spec.experiment) {
        case Experiment::T1: return run_t1(spec, progress);
        case Experiment::T2: return run_t2(spec, progress);
        case Experiment::T3: return run_t3(spec, progress);
    }
    return {};
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells) {
    if (cells.empty()) return;
    for (const auto& [k, v] : cells.front().key) out << k << ',';
    out << "runs,successes,success_rate,mean_evals_to_success,stddev_evals_to_success,mean_best_fitness,"
           "max_f_evals,f_budget,max_psi_evals,psi_budget,psi_overshoot_allowance,budget_ok\n";
    for (const auto& c : cells) {
        for (const auto& [k, v] : c.key) out << v << ',';
        out << c.runs << ',' << c.successes << ',' << format_real(c.success_rate()) << ','
            << format_real(c.mean_evals_to_success) << ',' << format_real(c.stddev_evals_to_success) << ','
            << format_real(c.mean_best_fitness) << ',' << c.max_f_evals << ',' << c.f_budget << ','
            << c.max_psi_evals << ',' << c.psi_budget << ',' << c.psi_overshoot_allowance << ','
            << (c.budget_ok ? "true" : "false") << '\n';
    }
}

namespace {

std::string percent(const CellResult& c) {
    return std::to_string(static_cast<int>(std::lround(100.0 * c.success_rate()))) + "%";
}

void pivot(std::ostream& out, const std::vector<const CellResult*>& cells, const std::string& row_col,
           const std::string& col_col) {
    std::vector<std::string> rows, cols;
    std::map<std::pair<std::string, std::string>, std::string> values;
    for (const auto* c : cells) {
        const auto r = c->key_value(row_col), k = c->key_value(col_col);
        if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        values[{r, k}] = percent(*c);
    }
    std::vector<std::size_t> width(cols.size() + 1, row_col.size());
    for (const auto& r : rows) width[0] = std::max(width[0], r.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        width[j + 1] = std::max<std::size_t>(cols[j].size(), 4);
        for (const auto& r : rows) width[j + 1] = std::max(width[j + 1], values[{r, cols[j]}].size());
    }
    auto cell = [&](const std::string& s, std::size_t w, bool left) {
        std::string pad(w - std::min(w, s.size()), ' ');
        out << ' ' << (left ? s + pad : pad + s) << " |";
    };
    out << '|';
    cell(row_col, width[0], true);
    for (std::size_t j = 0; j < cols.size(); ++j) cell(cols[j], width[j + 1], false);
    out << "\n|";
    out << ' ' << std::string(width[0], '-') << " |";
    for (std::size_t j = 0; j < cols.size(); ++j) out << ' ' << std::string(width[j + 1] - 1, '-') << ": |";
    out << '\n';
    for (const auto& r : rows) {
        out << '|';
        cell(r, width[0], true);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            auto it = values.find({r, cols[j]});
            cell(it == values.end() ? "-" : it->second, width[j + 1], false);
        }
        out << '\n';
    }
}

}  // namespace

void write_results_markdown(std::ostream& out, Experiment experiment, const std::vector<CellResult>& cells) {
    std::vector<std::string> problems;
    for (const auto& c : cells) {
        const auto p = c.key_value("problem");
        if (std::find(problems.begin(), problems.end(), p) == problems.end()) problems.push_back(p);
    }
    const char* title = experiment == Experiment::T1   ? "Catalog recovery success rate"
                        : experiment == Experiment::T2 ? "Catalog recovery by reference population"
                                                       : "Global optimum success rate";
    out << "# " << title << "\n\n";
    if (experiment == Experiment::T1) {
        std::vector<const CellResult*> all;
        for (const auto& c : cells) all.push_back(&c);
        pivot(out, all, "algorithm", "problem");
        return;
    }
    for (const auto& p : problems) {
        std::vector<const CellResult*> subset;
        for (const auto& c : cells)
            if (c.key_value("problem") == p) subset.push_back(&c);
        out << "## " << p << "\n\n";
        if (experiment == Experiment::T2)
            pivot(out, subset, "reference_size", "generations");
        else
            pivot(out, subset, "method", "budget");
        out << '\n';
    }
}

std::string explain_global(const PSCatalog& catalog, const BenchmarkProblem* problem) {
    std::ostringstream out;
    if (catalog.entries.empty()) {
        out << "Global explanation: the catalog is empty.\n";
        return out.str();
    }
    out << "Global explanation: " << catalog.entries.size() << " partial solutions, best first\n";
    out << "rank\tscore\tmean_fitness\tsimplicity\tatomicity\tpattern\n";
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
        const auto& e = catalog.entries[i];
        out << i + 1 << '\t' << format_real(e.score) << '\t' << format_real(e.metrics.mean_fitness) << '\t'
            << e.metrics.simplicity << '\t' << format_real(e.metrics.atomicity) << '\t' << to_string(e.ps);
        if (problem && std::find(problem->targets().begin(), problem->targets().end(), e.ps) != problem->targets().end())
            out << "\t(target)";
        out << '\n';
    }
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;
    for (std::size_t i = 0; i < catalog.entries.size(); ++i)
        for (std::size_t j = i + 1; j < catalog.entries.size(); ++j)
            if (!mergeable(catalog.entries[i].ps, catalog.entries[j].ps)) conflicts.emplace_back(i, j);
    out << "Conflicting pairs (cannot coexist in one solution): " << conflicts.size() << '\n';
    for (const auto& [i, j] : conflicts)
        out << "  " << to_string(catalog.entries[i].ps) << " x " << to_string(catalog.entries[j].ps) << '\n';
    if (problem) {
        std::size_t found = 0;
        for (const auto& t : problem->targets()) found += catalog.contains(t) ? 1U : 0U;
        out << "Targets present: " << found << "/" << problem->targets().size() << '\n';
    }
    return out.str();
}

std::string explain_local(const FullSolution& solution, const PSCatalog& catalog) {
    std::ostringstream out;
    std::vector<const CatalogEntry*> present;
    for (const auto& e : catalog.entries)
        if (contains(solution, e.ps)) present.push_back(&e);
    out << "Local explanation of " << to_string(solution) << ": contains " << present.size()
        << " catalog partial solutions\n";
    for (const auto* e : present)
        out << "  " << to_string(e->ps) << "\tscore " << format_real(e->score) << "\tmean_fitness "
            << format_real(e->metrics.mean_fitness) << "\tsimplicity " << e->metrics.simplicity << "\tatomicity "
            << format_real(e->metrics.atomicity) << '\n';
    return out.str();
}

}  // namespace psmine
