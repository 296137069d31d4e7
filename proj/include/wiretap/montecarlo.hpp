#pragma once

// Block-level simulation of the uncoded and idealized hybrid schemes.
//
// Randomness: every trial draws from substreams seeded by
// (seed, trial_index, stream role), and per-trial partial sums are reduced in
// ascending trial order, so results do not depend on the worker count.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "wiretap/analytic.hpp"

namespace wiretap {

struct MonteCarloSettings {
    std::int64_t block_length = 1000;
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
    std::int64_t sample_cap = 100'000'000;

    std::int64_t total_samples() const { return block_length * trials; }
};

/// Throws SampleBudgetExceeded or DomainError.
void check_settings(const MonteCarloSettings& settings);

struct EstimatorStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t sample_count = 0;
};

enum class StreamRole : std::uint32_t {
    Source = 0,
    Residual = 1,
    Digital = 2,
    MainNoise = 3,
    EveNoise = 4,
    Training = 5,
};

/// Independent engine for one (seed, trial, role) triple.
std::mt19937_64 substream(std::uint64_t seed, std::int64_t trial, StreamRole role);

/// n draws of Gaussian(0, variance) from the (seed, trial, role) substream;
/// all zeros when variance <= 0.
std::vector<double> gaussian_block(std::uint64_t seed, std::int64_t trial, StreamRole role,
                                   double variance, std::int64_t n);

/// One block of n channel uses and every intermediate signal.
struct TrialBatch {
    std::vector<double> source;          // v
    std::vector<double> quantized;       // v_q
    std::vector<double> residual;        // u = v - v_q
    std::vector<double> digital_signal;  // v_sec
    std::vector<double> channel_input;   // x
    std::vector<double> main_noise;      // w
    std::vector<double> eve_noise;       // w_e
    std::vector<double> main_rx;         // y
    std::vector<double> eve_rx;          // y_e
};

/// x = kappa * v; v_q = 0, u = v, v_sec = 0.
TrialBatch draw_uncoded_batch(const SystemConfig& config, const UncodedParams& params,
                              const ChannelPoint& point, std::uint64_t seed,
                              std::int64_t trial_index, std::int64_t block_length);

/// Forward test channel v = v_q + u with independent Gaussian parts, a
/// Gaussian digital codeword of power alpha*P, and x = v_sec + kappa*u.
TrialBatch draw_hybrid_batch(const SystemConfig& config, const HybridParams& params,
                             const ChannelPoint& point, std::uint64_t seed,
                             std::int64_t trial_index, std::int64_t block_length);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Unbiased sample covariance of the pair. Needs equal lengths >= 2.
Matrix2 empirical_covariance(std::span<const double> xs, std::span<const double> ys);

/// 0.5 * log2(c00 c11 / det c). Throws DomainError unless positive definite.
double gaussian_mi_from_cov(const Matrix2& cov);

/// Sample mean of residual * observation with its standard error.
EstimatorStats mmse_orthogonality_check(std::span<const double> residuals,
                                        std::span<const double> observations);

/// Everything measured in one simulation run.
struct SimulationReport {
    DistortionPoint point;             ///< provenance MonteCarlo
    EstimatorStats distortion;         ///< mean of (v - v_hat)^2
    EstimatorStats input_power;        ///< mean of x^2
    EstimatorStats orthogonality;      ///< mean of (v - v_hat) * y
    Matrix2 source_eve_cov{};          ///< covariance of (V, Y_e)
    EstimatorStats leakage;            ///< Gaussian MI estimate of (V, Y_e), bits
    double residual_var = 0.0;         ///< sample variance of u
    double quantized_residual_cov = 0.0;  ///< sample covariance of (v_q, u)
};

/// threads == 0 uses the hardware concurrency.
SimulationReport run_uncoded(const SystemConfig& config, const ChannelPoint& point,
                             const MonteCarloSettings& settings, unsigned threads = 0);

/// Throws OutOfDesignRegion when the point is below the design SNR.
SimulationReport run_hybrid_idealized(const SystemConfig& config, const HybridParams& params,
                                      const ChannelPoint& point,
                                      const MonteCarloSettings& settings, unsigned threads = 0);

std::pair<DistortionPoint, EstimatorStats> simulate_uncoded(const SystemConfig& config,
                                                            const ChannelPoint& point,
                                                            const MonteCarloSettings& settings,
                                                            unsigned threads = 0);

std::pair<DistortionPoint, EstimatorStats> simulate_hybrid_idealized(
    const SystemConfig& config, const HybridParams& params, const ChannelPoint& point,
    const MonteCarloSettings& settings, unsigned threads = 0);

/// Gaussian-MI leakage estimate of (V, Y_e) for the uncoded or hybrid scheme.
std::pair<double, EstimatorStats> empirical_leakage(const SystemConfig& config, Scheme scheme,
                                                    const ChannelPoint& point,
                                                    const MonteCarloSettings& settings,
                                                    unsigned threads = 0);

namespace detail {

/// Runs body(trial) for trial in [0, trials) over `threads` workers.
template <class Body>
void for_each_trial(std::int64_t trials, unsigned threads, Body&& body);

unsigned resolve_threads(unsigned threads, std::int64_t trials);

}  // namespace detail

}  // namespace wiretap

#include "wiretap/detail/parallel.hpp"
