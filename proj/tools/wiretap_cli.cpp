// wiretap-sim: analytic curves, Monte Carlo checks, and CSV sweeps for an
// analog Gaussian source over a degraded Gaussian wiretap channel.

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wiretap/wiretap.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Failure {
    int exit_code;
};

int exit_code_for(wt_status s)
{
    return (s == WT_ERR_VALIDATION || s == WT_ERR_INVALID_ARGUMENT) ? kExitValidation : kExitRuntime;
}

void check(wt_status s)
{
    if (s == WT_OK)
        return;
    std::fprintf(stderr, "error: %s: %s\n", wt_status_name(s), wt_last_error());
    throw Failure{exit_code_for(s)};
}

struct ExperimentDeleter {
    void operator()(wt_experiment* e) const { wt_experiment_destroy(e); }
};
struct SystemDeleter {
    void operator()(wt_system* s) const { wt_system_destroy(s); }
};
struct CodebookDeleter {
    void operator()(wt_codebook* c) const { wt_codebook_destroy(c); }
};
struct StringDeleter {
    void operator()(wt_string* s) const { wt_string_destroy(s); }
};
using Experiment = std::unique_ptr<wt_experiment, ExperimentDeleter>;
using System = std::unique_ptr<wt_system, SystemDeleter>;
using Codebook = std::unique_ptr<wt_codebook, CodebookDeleter>;
using String = std::unique_ptr<wt_string, StringDeleter>;

struct Options {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<std::int64_t> block_length;
    bool db_distortion = false;
    unsigned threads = 0;
    std::optional<double> snr_db;
    std::optional<double> leakage;
    std::string scheme;
    std::optional<int> levels;
    std::int64_t train_samples = 1'000'000;
    std::string codebook_out;
};

Experiment load_experiment(const Options& o)
{
    if (!o.config.empty() && !o.preset.empty()) {
        std::fprintf(stderr, "error: --config and --preset are mutually exclusive\n");
        throw Failure{kExitValidation};
    }
    wt_experiment* raw = nullptr;
    if (!o.config.empty())
        check(wt_experiment_from_file(o.config.c_str(), &raw));
    else
        check(wt_experiment_from_preset(o.preset.empty() ? "fig2" : o.preset.c_str(), &raw));
    return Experiment(raw);
}

wt_mc_settings mc_settings(const Options& o, const wt_experiment* e, std::int64_t default_trials)
{
    wt_mc_settings s{1000, default_trials, 0, 0};
    wt_experiment_get_montecarlo(e, &s);
    if (o.trials)
        s.trials = *o.trials;
    if (o.block_length)
        s.block_length = *o.block_length;
    if (o.seed)
        s.seed = *o.seed;
    return s;
}

std::vector<double> budgets_of(const wt_experiment* e, const Options& o)
{
    if (o.leakage)
        return {*o.leakage};
    std::size_t n = 0;
    check(wt_experiment_budgets(e, nullptr, 0, &n));
    std::vector<double> b(n);
    check(wt_experiment_budgets(e, b.data(), b.size(), &n));
    return b;
}

System make_system(const wt_experiment* e, double budget)
{
    wt_system_params p{};
    check(wt_experiment_get_system(e, &p));
    p.leakage_budget_bits = budget;
    wt_system* raw = nullptr;
    check(wt_system_create(&p, &raw));
    return System(raw);
}

double design_snr_db(const wt_experiment* e)
{
    wt_system_params p{};
    check(wt_experiment_get_system(e, &p));
    double db = 0.0;
    check(wt_snr_linear_to_db(p.power / p.noise_var_design, &db));
    return db;
}

std::vector<wt_scheme> schemes_from(const std::string& name, std::vector<wt_scheme> all)
{
    if (name.empty())
        return all;
    wt_scheme s{};
    check(wt_scheme_from_name(name.c_str(), &s));
    return {s};
}

int cmd_analytic(const Options& o)
{
    auto e = load_experiment(o);
    const double snr_db = o.snr_db.value_or(design_snr_db(e.get()));
    const auto schemes = schemes_from(o.scheme, {WT_SCHEME_SEPARATION, WT_SCHEME_UNCODED,
                                                 WT_SCHEME_HYBRID, WT_SCHEME_OUTER_BOUND});
    for (double budget : budgets_of(e.get(), o)) {
        auto sys = make_system(e.get(), budget);
        wt_scheme_params p{};
        check(wt_scheme_params_get(sys.get(), &p));
        double floor = 0.0;
        check(wt_eavesdropper_floor(sys.get(), &floor));
        std::printf("leakage budget %.6g bits, SNR_a %.6g dB\n", budget, snr_db);
        std::printf("  R_v = %.9g  kappa = %.9g  alpha = %.9g  R(alpha) = %.9g  beta = %.9g\n",
                    p.separation_rate_bits, p.uncoded_kappa, p.hybrid_alpha, p.hybrid_rate_bits,
                    p.hybrid_beta);
        std::printf("  eavesdropper distortion floor = %.9g\n", floor);
        std::printf("  %-12s %-16s %-16s %s\n", "scheme", "distortion", "distortion_dB", "leakage_bits");
        for (auto s : schemes) {
            wt_distortion_point d{};
            check(wt_analytic_distortion(sys.get(), s, snr_db, &d));
            std::printf("  %-12s %-16.9g %-16.6f %.9g\n", wt_scheme_name(s), d.distortion,
                        10.0 * std::log10(d.distortion), d.leakage_bound_bits);
        }
    }
    return 0;
}

int cmd_sweep(const Options& o)
{
    auto e = load_experiment(o);
    if (o.seed || o.trials || o.block_length) {
        auto s = mc_settings(o, e.get(), 200);
        check(wt_experiment_set_montecarlo(e.get(), &s));
    }
    const std::string out = o.out.empty() ? wt_experiment_output_path(e.get()) : o.out;
    if (out.empty()) {
        wt_string* raw = nullptr;
        check(wt_experiment_run_csv(e.get(), o.db_distortion, o.threads, &raw));
        String csv(raw);
        std::fwrite(wt_string_data(csv.get()), 1, wt_string_size(csv.get()), stdout);
    } else {
        check(wt_experiment_run_to_file(e.get(), out.c_str(), o.db_distortion, o.threads));
        std::fprintf(stderr, "wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_simulate(const Options& o)
{
    auto e = load_experiment(o);
    const double snr_db = o.snr_db.value_or(design_snr_db(e.get()));
    const auto settings = mc_settings(o, e.get(), 1000);
    const auto schemes = schemes_from(o.scheme, {WT_SCHEME_UNCODED, WT_SCHEME_HYBRID});
    for (double budget : budgets_of(e.get(), o)) {
        auto sys = make_system(e.get(), budget);
        for (auto s : schemes) {
            wt_simulation_result r{};
            check(wt_simulate(sys.get(), s, snr_db, &settings, o.threads, &r));
            const double z = (r.distortion.mean - r.analytic_distortion) / r.distortion.std_error;
            std::printf("%s  budget %.6g bits  SNR_a %.6g dB  samples %lld\n", wt_scheme_name(s),
                        budget, snr_db, static_cast<long long>(r.distortion.sample_count));
            std::printf("  distortion  %.9g +/- %.3g  (analytic %.9g, z = %.2f)\n",
                        r.distortion.mean, r.distortion.std_error, r.analytic_distortion, z);
            std::printf("  leakage     %.6g +/- %.3g bits  (bound %.6g)\n", r.leakage_bits.mean,
                        r.leakage_bits.std_error, r.point.leakage_bound_bits);
            std::printf("  input power %.6g +/- %.3g\n", r.input_power.mean, r.input_power.std_error);
            std::printf("  E[(v - v_hat) y] %.3g +/- %.3g\n", r.orthogonality.mean,
                        r.orthogonality.std_error);
        }
    }
    return 0;
}

int cmd_quantizer(const Options& o)
{
    auto e = load_experiment(o);
    const double budget = budgets_of(e.get(), o).front();
    auto sys = make_system(e.get(), budget);
    wt_system_params sp{};
    check(wt_system_get_params(sys.get(), &sp));
    wt_scheme_params p{};
    check(wt_scheme_params_get(sys.get(), &p));
    const int levels = o.levels.value_or(1 << static_cast<int>(std::ceil(p.hybrid_rate_bits)));
    const auto settings = mc_settings(o, e.get(), 1000);

    wt_codebook* raw = nullptr;
    check(wt_codebook_train_gaussian(sp.source_var, static_cast<std::size_t>(o.train_samples),
                                     settings.seed, levels, 1e-10, 500, &raw));
    Codebook cb(raw);
    wt_string* json_raw = nullptr;
    check(wt_codebook_to_json(cb.get(), &json_raw));
    String json(json_raw);
    if (o.codebook_out.empty()) {
        std::printf("%s\n", wt_string_data(json.get()));
    } else {
        std::FILE* f = std::fopen(o.codebook_out.c_str(), "w");
        if (!f) {
            std::fprintf(stderr, "error: cannot write %s\n", o.codebook_out.c_str());
            return kExitRuntime;
        }
        std::fputs(wt_string_data(json.get()), f);
        std::fclose(f);
    }

    const double snr_db = o.snr_db.value_or(design_snr_db(e.get()));
    wt_gap_result g{};
    check(wt_quantizer_gap(sys.get(), snr_db, levels, &settings, o.threads, &g));
    std::printf("levels %d at SNR_a %.6g dB (R(alpha) = %.6g bits)\n", levels, snr_db, p.hybrid_rate_bits);
    std::printf("  ideal D      %.9g\n", g.ideal_distortion);
    std::printf("  realized D   %.9g +/- %.3g\n", g.realized_distortion, g.realized_std_error);
    std::printf("  gap ratio    %.6g\n", g.gap_ratio);
    std::printf("  ideal D at log2(levels) bits %.9g, ratio %.6g\n", g.rate_matched_ideal_distortion,
                g.rate_matched_ratio);
    return 0;
}

int cmd_exponent(const Options& o)
{
    auto e = load_experiment(o);
    std::size_t n = 0;
    check(wt_experiment_exponents(e.get(), nullptr, 0, &n));
    std::vector<wt_exponent_row> rows(n);
    check(wt_experiment_exponents(e.get(), rows.data(), rows.size(), &n));
    std::printf("%-12s %-14s %-10s %s\n", "scheme", "budget_bits", "slope", "window_dB");
    for (const auto& r : rows)
        std::printf("%-12s %-14.6g %-10.4f %g..%g\n", wt_scheme_name(r.scheme), r.leakage_budget_bits,
                    r.slope, r.window_start_db, r.window_stop_db);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Analog Gaussian source over a Gaussian wiretap channel under SNR mismatch"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Experiment JSON file")->check(CLI::ExistingFile);
        sub->add_option("--preset", o.preset, "Built-in experiment")->check(CLI::IsMember({"fig2", "fig3"}));
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    };
    auto montecarlo = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Root RNG seed");
        sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
        sub->add_option("--block-length", o.block_length, "Channel uses per trial")->check(CLI::PositiveNumber);
    };

    auto* analytic = app.add_subcommand("analytic", "Closed-form distortion at one SNR");
    common(analytic);
    analytic->add_option("--snr-db", o.snr_db, "Actual SNR in dB (default: design SNR)");
    analytic->add_option("--leakage", o.leakage, "Override the leakage budget in bits");
    analytic->add_option("--scheme", o.scheme, "separation|uncoded|hybrid|outer_bound");

    auto* sweep = app.add_subcommand("sweep", "SNR sweep to CSV");
    common(sweep);
    montecarlo(sweep);
    sweep->add_option("--out", o.out, "CSV path (default: config output_path, else stdout)");
    sweep->add_flag("--db-distortion", o.db_distortion, "Write distortion as 10 log10(D)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo point vs closed form");
    common(simulate);
    montecarlo(simulate);
    simulate->add_option("--snr-db", o.snr_db, "Actual SNR in dB (default: design SNR)");
    simulate->add_option("--leakage", o.leakage, "Override the leakage budget in bits");
    simulate->add_option("--scheme", o.scheme, "uncoded|hybrid (default: both)");

    auto* quantizer = app.add_subcommand("quantizer", "Train a Lloyd-Max codebook and measure its gap");
    common(quantizer);
    montecarlo(quantizer);
    quantizer->add_option("--levels", o.levels, "Codebook size (default: 2^ceil(R(alpha)))")->check(CLI::PositiveNumber);
    quantizer->add_option("--train-samples", o.train_samples, "Training set size")->check(CLI::PositiveNumber);
    quantizer->add_option("--snr-db", o.snr_db, "Actual SNR in dB (default: design SNR)");
    quantizer->add_option("--leakage", o.leakage, "Override the leakage budget in bits");
    quantizer->add_option("--codebook-out", o.codebook_out, "Write the codebook JSON here");

    auto* exponent = app.add_subcommand("exponent", "Log-log distortion slopes over the top decade");
    common(exponent);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (*analytic) return cmd_analytic(o);
        if (*sweep) return cmd_sweep(o);
        if (*simulate) return cmd_simulate(o);
        if (*quantizer) return cmd_quantizer(o);
        if (*exponent) return cmd_exponent(o);
    } catch (const Failure& f) {
        return f.exit_code;
    }
    return 0;
}
