#pragma once

#include "pcc/dcsbm.hpp"
#include "pcc/graph.hpp"
#include "pcc/methods.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pcc {

/// A Monte Carlo study: one DCSBM family swept over a grid.
struct ExperimentSpec {
    /// 1a, 1b, 2a..2f, 3 or custom.
    std::string id = "custom";
    /// Name of the varying parameter: n, a0, b0 or c0.
    std::string grid_param = "n";
    std::vector<double> grid;
    int reps = 100;
    std::vector<Method> methods{Method::Pcc, Method::Npcc, Method::Score, Method::Rsc};
    std::uint64_t seed = 1;
    /// Custom experiments: a DCSBM params JSON document whose "n" is
    /// replaced by each grid value when grid_param == "n".
    std::string custom_params;
    MethodOptions options;
    /// Worker threads for repetitions; results do not depend on it.
    int threads = 1;

    /// Throws InputError for an incomplete or inconsistent spec.
    void validate() const;
};

/// Parameterisation of the built-in experiments. Throws InputError for an
/// unknown id.
ExperimentSpec builtin_spec(const std::string& id);

/// Spec from a JSON document. A known "id" starts from the built-in spec and
/// applies any of "grid", "reps", "methods", "seed", "threads", "tau",
/// "threshold_t", "mk", "restarts" on top; id "custom" also needs "params".
ExperimentSpec spec_from_json(const std::string& text);

/// Model for one grid point and repetition seed.
DcsbmParams experiment_params(const ExperimentSpec& spec, double value, std::uint64_t seed);

struct SummaryRow {
    std::string experiment;
    std::string grid_param;
    double value = 0.0;
    Method method = Method::Pcc;
    double mean_error = 0.0;
    double std_error = 0.0;
    double mean_seconds = 0.0;
    int failures = 0;
    int reps = 0;
};

struct RepRow {
    double value = 0.0;
    Method method = Method::Pcc;
    int rep = 0;
    std::uint64_t seed = 0;
    double error_rate = 0.0;
    std::size_t mismatches = 0;
    std::size_t scored = 0;
    double seconds = 0.0;
    bool failed = false;
    std::string message;
};

struct ExperimentResult {
    std::vector<SummaryRow> summary;
    /// Grid-major, method-minor, rep-minor.
    std::vector<RepRow> reps;
};

/// Repetition r at every grid point uses seed spec.seed + r; each rep
/// samples one network and runs every method on it. Failed reps are
/// excluded from the means and counted.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// experiment,grid_param,value,method,mean_error,std_error,mean_seconds,failures,reps
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_reps_csv(std::ostream& out, const std::vector<RepRow>& rows);

struct SweepRow {
    std::string sweep;
    Method method = Method::Pcc;
    std::string param;
    double value = 0.0;
    std::size_t mismatches = 0;
    std::size_t scored = 0;
    double error_rate = 0.0;
    /// Marks the row run at the default tau.
    bool is_default = false;
};

/// Mismatches of pcc* or npcc* for each M_k. The eigendecomposition is
/// computed once at max(grid) and sliced.
std::vector<SweepRow> sweep_mk(const Graph& g, const LabelVector& truth, int k, Method method,
                               const std::vector<int>& grid, const MethodOptions& opts = {});

/// Mismatches of npcc or rsc for each tau, plus one row at the default tau.
std::vector<SweepRow> sweep_tau(const Graph& g, const LabelVector& truth, int k, Method method,
                                const std::vector<double>& grid, const MethodOptions& opts = {});

/// sweep,method,param,value,mismatches,n,error_rate,default
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Minimal line chart: one polyline per method.
void write_summary_svg(std::ostream& out, const std::vector<SummaryRow>& rows, const std::string& title);
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& title);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

struct DetectRequest {
    std::filesystem::path graph;
    std::optional<std::filesystem::path> truth;
    Method method = Method::Pcc;
    int k = 2;
    MethodOptions options;
    EdgeListOptions edge_options;
    std::optional<std::filesystem::path> labels_out;
    std::optional<std::filesystem::path> embedding_out;
};

/// Loads, detects, optionally scores. Returns the JSON summary.
std::string run_detect(const DetectRequest& request);

/// JSON summary for a detection on an in-memory graph (truth optional).
std::string detection_summary(const Graph& g, int k, const Detection& det,
                              const std::optional<LabelVector>& truth, const LoadStats* stats = nullptr);

}  // namespace pcc
