#include "wiretap/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wiretap {

void check_settings(const MonteCarloSettings& s)
{
    if (s.block_length < 1 || s.trials < 1)
        throw DomainError("block_length and trials must be at least 1");
    if (s.sample_cap < 1)
        throw DomainError("sample_cap must be at least 1");
    if (s.trials > s.sample_cap / s.block_length)
        throw SampleBudgetExceeded("block_length * trials exceeds the sample cap of " +
                                   std::to_string(s.sample_cap));
}

namespace detail {

unsigned resolve_threads(unsigned threads, std::int64_t trials)
{
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::int64_t>(n, std::max<std::int64_t>(trials, 1)));
}

}  // namespace detail

std::mt19937_64 substream(std::uint64_t seed, std::int64_t trial, StreamRole role)
{
    const auto t = static_cast<std::uint64_t>(trial);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32),
                      static_cast<std::uint32_t>(role)};
    return std::mt19937_64(seq);
}

std::vector<double> gaussian_block(std::uint64_t seed, std::int64_t trial, StreamRole role,
                                   double variance, std::int64_t n)
{
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (variance <= 0.0)
        return out;
    auto engine = substream(seed, trial, role);
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    for (auto& x : out)
        x = dist(engine);
    return out;
}

namespace {

void add_channels(TrialBatch& b, const SystemConfig& c, const ChannelPoint& point,
                  std::uint64_t seed, std::int64_t trial, std::int64_t n)
{
    b.main_noise = gaussian_block(seed, trial, StreamRole::MainNoise, point.noise_var_actual(), n);
    b.eve_noise = gaussian_block(seed, trial, StreamRole::EveNoise, c.noise_var_eve, n);
    b.main_rx.resize(b.channel_input.size());
    b.eve_rx.resize(b.channel_input.size());
    for (std::size_t i = 0; i < b.channel_input.size(); ++i) {
        b.main_rx[i] = b.channel_input[i] + b.main_noise[i];
        b.eve_rx[i] = b.channel_input[i] + b.eve_noise[i];
    }
}

double residual_variance(const SystemConfig& c, const HybridParams& p)
{
    return c.source_var * std::exp2(-2.0 * p.rate_bits);
}

struct Partial {
    double err2 = 0, err4 = 0;
    double x2 = 0, x4 = 0;
    double orth = 0, orth2 = 0;
    double v = 0, ye = 0, vv = 0, yy = 0, vy = 0;
    double u = 0, uu = 0, q = 0, qu = 0;

    Partial& operator+=(const Partial& o)
    {
        err2 += o.err2; err4 += o.err4; x2 += o.x2; x4 += o.x4;
        orth += o.orth; orth2 += o.orth2;
        v += o.v; ye += o.ye; vv += o.vv; yy += o.yy; vy += o.vy;
        u += o.u; uu += o.uu; q += o.q; qu += o.qu;
        return *this;
    }
};

// `estimate(i)` returns the receiver's estimate of v[i]; `observation(i)`
// the signal it was formed from.
template <class Estimate, class Observation>
Partial accumulate(const TrialBatch& b, Estimate estimate, Observation observation)
{
    Partial p;
    for (std::size_t i = 0; i < b.source.size(); ++i) {
        const double e = b.source[i] - estimate(i);
        const double e2 = e * e;
        p.err2 += e2;
        p.err4 += e2 * e2;
        const double x2 = b.channel_input[i] * b.channel_input[i];
        p.x2 += x2;
        p.x4 += x2 * x2;
        const double o = e * observation(i);
        p.orth += o;
        p.orth2 += o * o;
        p.v += b.source[i];
        p.ye += b.eve_rx[i];
        p.vv += b.source[i] * b.source[i];
        p.yy += b.eve_rx[i] * b.eve_rx[i];
        p.vy += b.source[i] * b.eve_rx[i];
        p.u += b.residual[i];
        p.uu += b.residual[i] * b.residual[i];
        p.q += b.quantized[i];
        p.qu += b.quantized[i] * b.residual[i];
    }
    return p;
}

EstimatorStats stats_from_moments(double sum, double sum_sq, std::int64_t n)
{
    const double N = static_cast<double>(n);
    const double mean = sum / N;
    double var = n > 1 ? (sum_sq - N * mean * mean) / (N - 1.0) : 0.0;
    if (var < 0.0)
        var = 0.0;
    return {mean, std::sqrt(var / N), n};
}

double cov_from_sums(double sxy, double sx, double sy, double N)
{
    return (sxy - sx * sy / N) / (N - 1.0);
}

// Delta-method error of the Gaussian MI estimate; the second term is the
// chi-square spread of rho_hat^2 that dominates near independence.
EstimatorStats leakage_stats(const Matrix2& cov, std::int64_t n)
{
    const double mi = gaussian_mi_from_cov(cov);
    const double rho = cov[0][1] / std::sqrt(cov[0][0] * cov[1][1]);
    const double N = static_cast<double>(n);
    const double ln2 = std::numbers::ln2;
    const double delta = std::abs(rho) * (1.0 - rho * rho) / (ln2 * std::sqrt(N));
    const double floor = 1.0 / (std::numbers::sqrt2 * N * ln2);
    return {mi, std::hypot(delta, floor), n};
}

SimulationReport finish(const ChannelPoint& point, Scheme scheme,
                        double leakage_bound, const Partial& t, std::int64_t n)
{
    const double N = static_cast<double>(n);
    SimulationReport r;
    r.distortion = stats_from_moments(t.err2, t.err4, n);
    r.input_power = stats_from_moments(t.x2, t.x4, n);
    r.orthogonality = stats_from_moments(t.orth, t.orth2, n);
    r.source_eve_cov = {{{cov_from_sums(t.vv, t.v, t.v, N), cov_from_sums(t.vy, t.v, t.ye, N)},
                         {cov_from_sums(t.vy, t.v, t.ye, N), cov_from_sums(t.yy, t.ye, t.ye, N)}}};
    r.leakage = leakage_stats(r.source_eve_cov, n);
    r.residual_var = cov_from_sums(t.uu, t.u, t.u, N);
    r.quantized_residual_cov = cov_from_sums(t.qu, t.q, t.u, N);
    r.point = {point.snr_a(), r.distortion.mean, leakage_bound, scheme, Provenance::MonteCarlo};
    return r;
}

template <class TrialFn>
Partial reduce_trials(const MonteCarloSettings& s, unsigned threads, TrialFn trial_fn)
{
    std::vector<Partial> partials(static_cast<std::size_t>(s.trials));
    detail::for_each_trial(s.trials, threads, [&](std::int64_t t) {
        partials[static_cast<std::size_t>(t)] = trial_fn(t);
    });
    Partial total;
    for (const auto& p : partials)
        total += p;
    return total;
}

}  // namespace

TrialBatch draw_uncoded_batch(const SystemConfig& config, const UncodedParams& params,
                              const ChannelPoint& point, std::uint64_t seed,
                              std::int64_t trial_index, std::int64_t n)
{
    const auto& c = validate(config);
    TrialBatch b;
    b.source = gaussian_block(seed, trial_index, StreamRole::Source, c.source_var, n);
    b.quantized.assign(b.source.size(), 0.0);
    b.residual = b.source;
    b.digital_signal.assign(b.source.size(), 0.0);
    b.channel_input.resize(b.source.size());
    for (std::size_t i = 0; i < b.source.size(); ++i)
        b.channel_input[i] = params.kappa * b.source[i];
    add_channels(b, c, point, seed, trial_index, n);
    return b;
}

TrialBatch draw_hybrid_batch(const SystemConfig& config, const HybridParams& params,
                             const ChannelPoint& point, std::uint64_t seed,
                             std::int64_t trial_index, std::int64_t n)
{
    const auto& c = validate(config);
    const double dq = residual_variance(c, params);
    TrialBatch b;
    b.quantized = gaussian_block(seed, trial_index, StreamRole::Source, c.source_var - dq, n);
    b.residual = gaussian_block(seed, trial_index, StreamRole::Residual, dq, n);
    b.digital_signal =
        gaussian_block(seed, trial_index, StreamRole::Digital, params.alpha * c.power, n);
    b.source.resize(b.quantized.size());
    b.channel_input.resize(b.quantized.size());
    for (std::size_t i = 0; i < b.quantized.size(); ++i) {
        b.source[i] = b.quantized[i] + b.residual[i];
        b.channel_input[i] = b.digital_signal[i] + params.residual_scale * b.residual[i];
    }
    add_channels(b, c, point, seed, trial_index, n);
    return b;
}

Matrix2 empirical_covariance(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw DomainError("covariance streams must have equal length");
    if (xs.size() < 2)
        throw DomainError("covariance needs at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double cxy = sxy / (n - 1.0);
    return {{{sxx / (n - 1.0), cxy}, {cxy, syy / (n - 1.0)}}};
}

double gaussian_mi_from_cov(const Matrix2& cov)
{
    const double det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    if (!(cov[0][0] > 0.0) || !(det > 0.0))
        throw DomainError("covariance matrix is not positive definite");
    return 0.5 * std::log2(cov[0][0] * cov[1][1] / det);
}

EstimatorStats mmse_orthogonality_check(std::span<const double> residuals,
                                        std::span<const double> observations)
{
    if (residuals.size() != observations.size())
        throw DomainError("residuals and observations must have equal length");
    if (residuals.empty())
        return {};
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double p = residuals[i] * observations[i];
        s += p;
        s2 += p * p;
    }
    return stats_from_moments(s, s2, static_cast<std::int64_t>(residuals.size()));
}

SimulationReport run_uncoded(const SystemConfig& config, const ChannelPoint& point,
                             const MonteCarloSettings& settings, unsigned threads)
{
    const auto& c = validate(config);
    check_settings(settings);
    const auto params = uncoded_kappa(c);
    const double k = params.kappa;
    const double gain = k * c.source_var / (k * k * c.source_var + point.noise_var_actual());

    const Partial total = reduce_trials(settings, threads, [&](std::int64_t t) {
        const auto b = draw_uncoded_batch(c, params, point, settings.seed, t, settings.block_length);
        return accumulate(b, [&](std::size_t i) { return gain * b.main_rx[i]; },
                          [&](std::size_t i) { return b.main_rx[i]; });
    });
    return finish(point, Scheme::Uncoded, uncoded_leakage(c, k), total,
                  settings.total_samples());
}

SimulationReport run_hybrid_idealized(const SystemConfig& config, const HybridParams& params,
                                      const ChannelPoint& point,
                                      const MonteCarloSettings& settings, unsigned threads)
{
    const auto& c = validate(config);
    check_settings(settings);
    if (!point.in_design_region())
        throw OutOfDesignRegion("hybrid simulation requires the actual SNR to be at or above the design SNR");
    const double dq = residual_variance(c, params);
    const double k = params.residual_scale;
    const double gain = k * dq / (k * k * dq + point.noise_var_actual());

    // The receiver decodes v_sec and v_q perfectly, then estimates u from
    // the analog observation y - v_sec.
    const Partial total = reduce_trials(settings, threads, [&](std::int64_t t) {
        const auto b = draw_hybrid_batch(c, params, point, settings.seed, t, settings.block_length);
        auto analog = [&](std::size_t i) { return b.main_rx[i] - b.digital_signal[i]; };
        return accumulate(b, [&](std::size_t i) { return b.quantized[i] + gain * analog(i); },
                          analog);
    });
    const double bound = capacity((1.0 - params.alpha) * c.power / c.noise_var_eve);
    return finish(point, Scheme::Hybrid, bound, total, settings.total_samples());
}

std::pair<DistortionPoint, EstimatorStats> simulate_uncoded(const SystemConfig& config,
                                                            const ChannelPoint& point,
                                                            const MonteCarloSettings& settings,
                                                            unsigned threads)
{
    auto r = run_uncoded(config, point, settings, threads);
    return {r.point, r.distortion};
}

std::pair<DistortionPoint, EstimatorStats> simulate_hybrid_idealized(
    const SystemConfig& config, const HybridParams& params, const ChannelPoint& point,
    const MonteCarloSettings& settings, unsigned threads)
{
    auto r = run_hybrid_idealized(config, params, point, settings, threads);
    return {r.point, r.distortion};
}

std::pair<double, EstimatorStats> empirical_leakage(const SystemConfig& config, Scheme scheme,
                                                    const ChannelPoint& point,
                                                    const MonteCarloSettings& settings,
                                                    unsigned threads)
{
    SimulationReport r;
    switch (scheme) {
    case Scheme::Uncoded: r = run_uncoded(config, point, settings, threads); break;
    case Scheme::Hybrid:
        r = run_hybrid_idealized(config, hybrid_alpha(config), point, settings, threads);
        break;
    default: throw DomainError("empirical leakage is simulated for uncoded and hybrid only");
    }
    return {r.leakage.mean, r.leakage};
}

}  // namespace wiretap
