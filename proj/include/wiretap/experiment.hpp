#pragma once

// SNR sweeps over schemes and leakage budgets, exponent reports, and the CSV
// interchange format.
//
// CSV header (fixed):
//   scheme,leakage_budget_bits,snr_a_db,distortion,leakage_bound_bits,provenance,trials,block_length,seed
// The last three columns are empty on analytic rows. Numbers use '.' as the
// decimal separator and 17 significant digits.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/montecarlo.hpp"

namespace wiretap {

struct SnrGrid {
    double start = 20.0;
    double stop = 50.0;
    double step = 1.0;

    std::vector<double> points_db() const;
};

struct ExperimentSpec {
    SystemConfig system;
    SnrGrid snr_grid_db;
    std::vector<Scheme> schemes;
    /// Empty means {system.leakage_budget_bits}.
    std::vector<double> leakage_budgets_bits;
    std::optional<MonteCarloSettings> montecarlo;
    std::string output_path;

    std::vector<double> budgets() const;
    SystemConfig system_for_budget(double budget) const;
};

/// Throws ValidationError naming the offending field.
void validate_spec(const ExperimentSpec& spec);

/// Parses a JSON document whose keys mirror ExperimentSpec; unknown keys are errors.
ExperimentSpec spec_from_json(const std::string& text);
ExperimentSpec spec_from_file(const std::string& path);
std::string spec_to_json(const ExperimentSpec& spec);

/// "fig2" or "fig3".
ExperimentSpec preset(std::string_view name);

struct SweepRow {
    Scheme scheme;
    double leakage_budget_bits;
    double snr_a_db;
    double distortion;
    double leakage_bound_bits;
    Provenance provenance;
    std::optional<std::int64_t> trials;
    std::optional<std::int64_t> block_length;
    std::optional<std::uint64_t> seed;
};

/// Rows sorted by (budget, scheme, snr, provenance). Monte Carlo rows are
/// produced for uncoded and hybrid only, and for hybrid only at or above the
/// design SNR.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned threads = 0);

struct CsvOptions {
    bool distortion_db = false;  ///< write 10*log10(D) instead of D
};

std::string format_csv(const std::vector<SweepRow>& rows, CsvOptions options = {});
std::vector<SweepRow> parse_csv(const std::string& text);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

struct ExponentRow {
    Scheme scheme;
    double leakage_budget_bits;
    double slope;
    double window_start_db;
    double window_stop_db;
};

/// Fits the log-log slope over the top decade of the spec's grid for each
/// (budget, scheme). Throws DomainError when the grid spans less than 10 dB.
std::vector<ExponentRow> report_exponents(const ExperimentSpec& spec);

}  // namespace wiretap
