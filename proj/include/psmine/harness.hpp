#pragma once

/// @file harness.hpp
/// @brief Experiment protocols (catalog recovery, reference-population study,
/// solution quality under a fixed budget), result tables and explanation reports.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psmine/baselines.hpp"
#include "psmine/benchmarks.hpp"
#include "psmine/miner.hpp"

namespace psmine {

enum class Experiment { T1, T2, T3 };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view text);

/// One row of the miner comparison grid.
struct MinerRow {
    enum class Algorithm { Miner, PsGa, HillClimber };
    Algorithm algorithm = Algorithm::Miner;
    LocalSearch variant = LocalSearch::SpecializationOnly;
    std::size_t population_size = 150;
    bool use_archive = true;

    std::string label() const;
};

std::vector<MinerRow> full_miner_grid();

/// Best configuration found by the miner comparison; used by T2 and T3.
MinerConfig winning_miner_config();

struct ExperimentSpec {
    Experiment experiment = Experiment::T1;
    std::vector<ProblemKind> problems{ProblemKind::RoyalRoad, ProblemKind::RoyalRoadOverlaps, ProblemKind::TrapK};
    std::size_t runs_per_cell = 100;
    std::uint64_t base_seed = 0;
    /// 0 selects PSMINE_THREADS or the hardware count.
    std::size_t threads = 0;

    // T1 and T2
    std::size_t reference_size = 10000;
    std::size_t psi_budget = 100000;
    std::vector<MinerRow> miner_rows = full_miner_grid();

    // T2
    std::vector<std::size_t> reference_sizes{100, 200, 500, 1000, 2000, 5000, 10000};
    std::vector<std::size_t> generations{0, 10, 20, 50, 100, 200};

    // T3
    std::vector<std::size_t> budgets{1000, 5000, 10000, 15000, 20000, 25000, 30000};
    std::vector<std::size_t> psi_shares_percent{10, 20, 30, 40, 50, 60, 70, 80, 90};
    bool include_baselines = true;
    std::size_t generated_per_run = 100;

    /// Reduced grid and 20 runs per cell.
    static ExperimentSpec quick(Experiment experiment);
    void validate() const;
};

struct RunOutcome {
    bool success = false;
    std::size_t f_evals = 0;
    std::size_t psi_evals = 0;
    double best_fitness = 0.0;
    bool budget_ok = true;
};

struct CellResult {
    /// Ordered (column, value) pairs identifying the cell.
    std::vector<std::pair<std::string, std::string>> key;
    std::size_t successes = 0;
    std::size_t runs = 0;
    /// Evaluations used by successful runs (F^psi for T1/T2, F + F^psi for T3).
    double mean_evals_to_success = 0.0;
    double stddev_evals_to_success = 0.0;
    double mean_best_fitness = 0.0;
    std::size_t max_f_evals = 0;
    std::size_t max_psi_evals = 0;
    std::size_t f_budget = 0;
    std::size_t psi_budget = 0;
    std::size_t psi_overshoot_allowance = 0;
    bool budget_ok = true;
    double wall_seconds = 0.0;

    double success_rate() const { return runs == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs); }
    std::string key_value(std::string_view column) const;
};

using ProgressCallback = std::function<void(const CellResult&)>;

std::vector<CellResult> run_t1(const ExperimentSpec& spec, const ProgressCallback& progress = {});
std::vector<CellResult> run_t2(const ExperimentSpec& spec, const ProgressCallback& progress = {});
std::vector<CellResult> run_t3(const ExperimentSpec& spec, const ProgressCallback& progress = {});
std::vector<CellResult> run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress = {});

/// Largest single-generation batch a miner row can score past its budget.
std::size_t overshoot_allowance(const MinerRow& row, const SearchSpace& space, std::size_t qty_ret);

/// Machine-readable results; contains no timing so reruns are byte-identical.
void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells);
/// Success-rate pivot tables, one per problem.
void write_results_markdown(std::ostream& out, Experiment experiment, const std::vector<CellResult>& cells);

/// Ranked catalog listing plus every pair of entries that cannot coexist.
std::string explain_global(const PSCatalog& catalog, const BenchmarkProblem* problem = nullptr);
/// Catalog entries contained in `solution`, in catalog order.
std::string explain_local(const FullSolution& solution, const PSCatalog& catalog);

}  // namespace psmine
