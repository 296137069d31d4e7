#include "wiretap/wiretap.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "wiretap/experiment.hpp"
#include "wiretap/quantizer.hpp"

struct wt_system {
    wiretap::SystemConfig config;
};

struct wt_experiment {
    wiretap::ExperimentSpec spec;
};

struct wt_codebook {
    wiretap::ScalarCodebook codebook;
};

struct wt_string {
    std::string text;
};

namespace {

thread_local std::string last_error;

// Runs `body`, translating exceptions into status codes.
template <class Body>
wt_status guarded(Body&& body) noexcept
{
    try {
        body();
        last_error.clear();
        return WT_OK;
    } catch (const wiretap::ValidationError& e) {
        last_error = e.what();
        return WT_ERR_VALIDATION;
    } catch (const wiretap::OutOfDesignRegion& e) {
        last_error = e.what();
        return WT_ERR_OUT_OF_DESIGN_REGION;
    } catch (const wiretap::SampleBudgetExceeded& e) {
        last_error = e.what();
        return WT_ERR_SAMPLE_BUDGET;
    } catch (const wiretap::QuantizerError& e) {
        last_error = e.what();
        return WT_ERR_QUANTIZER;
    } catch (const wiretap::IoError& e) {
        last_error = e.what();
        return WT_ERR_IO;
    } catch (const wiretap::DomainError& e) {
        last_error = e.what();
        return WT_ERR_DOMAIN;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return WT_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return WT_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return WT_ERR_INTERNAL;
    }
}

wt_status null_argument(const char* what)
{
    last_error = std::string("null argument: ") + what;
    return WT_ERR_INVALID_ARGUMENT;
}

wt_status invalid_scheme()
{
    last_error = "invalid scheme";
    return WT_ERR_INVALID_ARGUMENT;
}

#define WT_REQUIRE(ptr) \
    do {                 \
        if (!(ptr))      \
            return null_argument(#ptr); \
    } while (0)

bool valid_scheme(wt_scheme s)
{
    return s >= WT_SCHEME_SEPARATION && s <= WT_SCHEME_OUTER_BOUND;
}

wiretap::Scheme to_cpp(wt_scheme s) { return static_cast<wiretap::Scheme>(s); }
wt_scheme to_c(wiretap::Scheme s) { return static_cast<wt_scheme>(s); }

wt_distortion_point to_c(const wiretap::DistortionPoint& p)
{
    return {p.snr_a_linear, p.distortion, p.leakage_bound_bits, to_c(p.scheme),
            p.provenance == wiretap::Provenance::Analytic ? WT_PROVENANCE_ANALYTIC
                                                          : WT_PROVENANCE_MONTECARLO};
}

wt_estimate to_c(const wiretap::EstimatorStats& s) { return {s.mean, s.std_error, s.sample_count}; }

wiretap::MonteCarloSettings to_cpp(const wt_mc_settings& s)
{
    wiretap::MonteCarloSettings out;
    out.block_length = s.block_length;
    out.trials = s.trials;
    out.seed = s.seed;
    if (s.sample_cap > 0)
        out.sample_cap = s.sample_cap;
    return out;
}

wt_string* make_string(std::string text) { return new wt_string{std::move(text)}; }

}  // namespace

extern "C" {

const char* wt_last_error(void) { return last_error.c_str(); }

const char* wt_status_name(wt_status status)
{
    switch (status) {
    case WT_OK: return "ok";
    case WT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WT_ERR_VALIDATION: return "validation error";
    case WT_ERR_DOMAIN: return "domain error";
    case WT_ERR_OUT_OF_DESIGN_REGION: return "out of design region";
    case WT_ERR_SAMPLE_BUDGET: return "sample budget exceeded";
    case WT_ERR_QUANTIZER: return "quantizer error";
    case WT_ERR_IO: return "I/O error";
    case WT_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* wt_scheme_name(wt_scheme scheme)
{
    if (!valid_scheme(scheme))
        return "unknown";
    return wiretap::to_string(to_cpp(scheme)).data();
}

wt_status wt_scheme_from_name(const char* name, wt_scheme* out)
{
    WT_REQUIRE(name);
    WT_REQUIRE(out);
    return guarded([&] { *out = to_c(wiretap::scheme_from_string(name)); });
}

const char* wt_string_data(const wt_string* s) { return s ? s->text.c_str() : ""; }
size_t wt_string_size(const wt_string* s) { return s ? s->text.size() : 0; }
void wt_string_destroy(wt_string* s) { delete s; }

wt_status wt_system_create(const wt_system_params* params, wt_system** out)
{
    WT_REQUIRE(params);
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        wiretap::SystemConfig c{params->power, params->noise_var_design, params->noise_var_eve,
                                params->source_var, params->leakage_budget_bits};
        wiretap::validate(c);
        *out = new wt_system{c};
    });
}

void wt_system_destroy(wt_system* system) { delete system; }

wt_status wt_system_get_params(const wt_system* system, wt_system_params* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(out);
    const auto& c = system->config;
    *out = {c.power, c.noise_var_design, c.noise_var_eve, c.source_var, c.leakage_budget_bits};
    return WT_OK;
}

wt_status wt_capacity(double x, double* out_bits)
{
    WT_REQUIRE(out_bits);
    return guarded([&] { *out_bits = wiretap::capacity(x); });
}

wt_status wt_snr_db_to_linear(double db, double* out)
{
    WT_REQUIRE(out);
    return guarded([&] { *out = wiretap::snr_db_to_linear(db); });
}

wt_status wt_snr_linear_to_db(double lin, double* out)
{
    WT_REQUIRE(out);
    return guarded([&] { *out = wiretap::snr_linear_to_db(lin); });
}

wt_status wt_scheme_params_get(const wt_system* system, wt_scheme_params* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(out);
    return guarded([&] {
        const auto& c = system->config;
        const auto h = wiretap::hybrid_alpha(c);
        *out = {wiretap::separation_rate(c).rate_bits, wiretap::uncoded_kappa(c).kappa, h.alpha,
                h.rate_bits, h.residual_scale, h.beta_mmse};
    });
}

wt_status wt_analytic_distortion(const wt_system* system, wt_scheme scheme, double snr_a_db,
                                 wt_distortion_point* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(out);
    if (!valid_scheme(scheme))
        return invalid_scheme();
    return guarded([&] {
        const auto point = wiretap::ChannelPoint::from_snr_db(system->config, snr_a_db);
        *out = to_c(wiretap::analytic_distortion(system->config, to_cpp(scheme), point));
    });
}

wt_status wt_eavesdropper_floor(const wt_system* system, double* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(out);
    return guarded([&] { *out = wiretap::eavesdropper_distortion_floor(system->config); });
}

wt_status wt_analytic_exponent(const wt_system* system, wt_scheme scheme, double start_db,
                               double stop_db, int count, double* out_slope)
{
    WT_REQUIRE(system);
    WT_REQUIRE(out_slope);
    if (!valid_scheme(scheme))
        return invalid_scheme();
    return guarded([&] {
        *out_slope = wiretap::analytic_exponent(system->config, to_cpp(scheme), start_db, stop_db, count);
    });
}

wt_status wt_simulate(const wt_system* system, wt_scheme scheme, double snr_a_db,
                      const wt_mc_settings* settings, unsigned threads, wt_simulation_result* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(settings);
    WT_REQUIRE(out);
    if (scheme != WT_SCHEME_UNCODED && scheme != WT_SCHEME_HYBRID) {
        last_error = "only the uncoded and hybrid schemes can be simulated";
        return WT_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto& c = system->config;
        const auto point = wiretap::ChannelPoint::from_snr_db(c, snr_a_db);
        const auto s = to_cpp(*settings);
        const auto r = scheme == WT_SCHEME_UNCODED
                           ? wiretap::run_uncoded(c, point, s, threads)
                           : wiretap::run_hybrid_idealized(c, wiretap::hybrid_alpha(c), point, s, threads);
        *out = {to_c(r.point), to_c(r.distortion), to_c(r.input_power), to_c(r.orthogonality),
                to_c(r.leakage), wiretap::analytic_distortion(c, to_cpp(scheme), point).distortion};
    });
}

wt_status wt_experiment_from_json(const char* json_text, wt_experiment** out)
{
    WT_REQUIRE(json_text);
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new wt_experiment{wiretap::spec_from_json(json_text)}; });
}

wt_status wt_experiment_from_file(const char* path, wt_experiment** out)
{
    WT_REQUIRE(path);
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new wt_experiment{wiretap::spec_from_file(path)}; });
}

wt_status wt_experiment_from_preset(const char* name, wt_experiment** out)
{
    WT_REQUIRE(name);
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new wt_experiment{wiretap::preset(name)}; });
}

void wt_experiment_destroy(wt_experiment* experiment) { delete experiment; }

wt_status wt_experiment_get_system(const wt_experiment* experiment, wt_system_params* out)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(out);
    const auto& c = experiment->spec.system;
    *out = {c.power, c.noise_var_design, c.noise_var_eve, c.source_var, c.leakage_budget_bits};
    return WT_OK;
}

wt_status wt_experiment_budgets(const wt_experiment* experiment, double* out, size_t capacity,
                                size_t* out_count)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(out_count);
    if (capacity > 0)
        WT_REQUIRE(out);
    auto budgets = experiment->spec.budgets();
    std::sort(budgets.begin(), budgets.end());
    *out_count = budgets.size();
    for (std::size_t i = 0; i < budgets.size() && i < capacity; ++i)
        out[i] = budgets[i];
    return WT_OK;
}

wt_status wt_experiment_set_montecarlo(wt_experiment* experiment, const wt_mc_settings* settings)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(settings);
    return guarded([&] {
        const auto s = to_cpp(*settings);
        wiretap::check_settings(s);
        experiment->spec.montecarlo = s;
    });
}

int wt_experiment_get_montecarlo(const wt_experiment* experiment, wt_mc_settings* out)
{
    if (!experiment || !experiment->spec.montecarlo)
        return 0;
    if (out) {
        const auto& s = *experiment->spec.montecarlo;
        *out = {s.block_length, s.trials, s.seed, s.sample_cap};
    }
    return 1;
}

wt_status wt_experiment_set_output_path(wt_experiment* experiment, const char* path)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(path);
    return guarded([&] { experiment->spec.output_path = path; });
}

const char* wt_experiment_output_path(const wt_experiment* experiment)
{
    return experiment ? experiment->spec.output_path.c_str() : "";
}

wt_status wt_experiment_to_json(const wt_experiment* experiment, wt_string** out)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(out);
    return guarded([&] { *out = make_string(wiretap::spec_to_json(experiment->spec)); });
}

wt_status wt_experiment_run_csv(const wt_experiment* experiment, int distortion_db,
                                unsigned threads, wt_string** out_csv)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(out_csv);
    *out_csv = nullptr;
    return guarded([&] {
        const auto rows = wiretap::run_sweep(experiment->spec, threads);
        *out_csv = make_string(wiretap::format_csv(rows, {distortion_db != 0}));
    });
}

wt_status wt_experiment_run_to_file(const wt_experiment* experiment, const char* path,
                                    int distortion_db, unsigned threads)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(path);
    return guarded([&] {
        const auto rows = wiretap::run_sweep(experiment->spec, threads);
        wiretap::write_file_atomic(path, wiretap::format_csv(rows, {distortion_db != 0}));
    });
}

wt_status wt_experiment_exponents(const wt_experiment* experiment, wt_exponent_row* rows,
                                  size_t capacity, size_t* out_count)
{
    WT_REQUIRE(experiment);
    WT_REQUIRE(out_count);
    if (capacity > 0)
        WT_REQUIRE(rows);
    return guarded([&] {
        const auto report = wiretap::report_exponents(experiment->spec);
        *out_count = report.size();
        for (std::size_t i = 0; i < report.size() && i < capacity; ++i) {
            const auto& r = report[i];
            rows[i] = {to_c(r.scheme), r.leakage_budget_bits, r.slope, r.window_start_db,
                       r.window_stop_db};
        }
    });
}

wt_status wt_codebook_train(const double* samples, size_t count, int num_levels, double tol,
                            int max_iter, wt_codebook** out)
{
    WT_REQUIRE(out);
    if (count > 0)
        WT_REQUIRE(samples);
    *out = nullptr;
    return guarded([&] {
        auto cb = wiretap::lloyd_max_train({samples, count}, num_levels, {tol, max_iter});
        *out = new wt_codebook{std::move(cb)};
    });
}

wt_status wt_codebook_train_gaussian(double variance, size_t count, uint64_t seed, int num_levels,
                                     double tol, int max_iter, wt_codebook** out)
{
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        if (!(variance > 0.0))
            throw wiretap::DomainError("variance must be positive");
        const auto samples = wiretap::gaussian_block(seed, 0, wiretap::StreamRole::Training,
                                                     variance, static_cast<std::int64_t>(count));
        auto cb = wiretap::lloyd_max_train(samples, num_levels, {tol, max_iter});
        *out = new wt_codebook{std::move(cb)};
    });
}

wt_status wt_codebook_from_json(const char* json_text, wt_codebook** out)
{
    WT_REQUIRE(json_text);
    WT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new wt_codebook{wiretap::codebook_from_json(json_text)}; });
}

void wt_codebook_destroy(wt_codebook* codebook) { delete codebook; }

size_t wt_codebook_size(const wt_codebook* codebook)
{
    return codebook ? codebook->codebook.levels.size() : 0;
}

wt_status wt_codebook_levels(const wt_codebook* codebook, double* out, size_t capacity)
{
    WT_REQUIRE(codebook);
    WT_REQUIRE(out);
    const auto& levels = codebook->codebook.levels;
    if (capacity < levels.size()) {
        last_error = "level buffer too small";
        return WT_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(out, levels.data(), levels.size() * sizeof(double));
    return WT_OK;
}

wt_status wt_codebook_distortion(const wt_codebook* codebook, double* out)
{
    WT_REQUIRE(codebook);
    WT_REQUIRE(out);
    *out = codebook->codebook.training_distortion;
    return WT_OK;
}

wt_status wt_codebook_quantize(const wt_codebook* codebook, double x, size_t* out_index,
                               double* out_reconstruction)
{
    WT_REQUIRE(codebook);
    const auto q = wiretap::quantize(codebook->codebook, x);
    if (out_index)
        *out_index = q.index;
    if (out_reconstruction)
        *out_reconstruction = q.reconstruction;
    return WT_OK;
}

wt_status wt_codebook_to_json(const wt_codebook* codebook, wt_string** out)
{
    WT_REQUIRE(codebook);
    WT_REQUIRE(out);
    return guarded([&] { *out = make_string(wiretap::to_json(codebook->codebook)); });
}

wt_status wt_quantizer_gap(const wt_system* system, double snr_a_db, int num_levels,
                           const wt_mc_settings* settings, unsigned threads, wt_gap_result* out)
{
    WT_REQUIRE(system);
    WT_REQUIRE(settings);
    WT_REQUIRE(out);
    return guarded([&] {
        const auto point = wiretap::ChannelPoint::from_snr_db(system->config, snr_a_db);
        const auto g = wiretap::hybrid_quantizer_gap(system->config, point, num_levels,
                                                     to_cpp(*settings), threads);
        *out = {g.ideal_distortion, g.realized_distortion, g.gap_ratio,
                g.rate_matched_ideal_distortion, g.rate_matched_ratio, g.realized.std_error};
    });
}

}  // extern "C"
