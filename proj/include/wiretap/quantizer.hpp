#pragma once

// Lloyd-Max scalar quantizer, used to measure how far a realizable quantizer
// sits from the ideal rate-distortion split assumed by the hybrid scheme.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wiretap/montecarlo.hpp"

namespace wiretap {

struct ScalarCodebook {
    std::vector<double> levels;      ///< sorted reconstruction points
    std::vector<double> thresholds;  ///< midpoints of adjacent levels
    double training_distortion = 0.0;
    int iterations = 0;
    std::int64_t sample_count = 0;
    /// Training MSE after each iteration; the final entry is the converged codebook.
    std::vector<double> distortion_history;
};

struct LloydMaxOptions {
    double tol = 1e-10;  ///< stop when the relative MSE drop falls below this
    int max_iter = 500;
};

/// Throws QuantizerError for fewer distinct samples than levels, or when an
/// empty cell cannot be repaired.
ScalarCodebook lloyd_max_train(std::span<const double> samples, int num_levels,
                               LloydMaxOptions options = {});

struct Quantized {
    std::size_t index;
    double reconstruction;
};

/// A value exactly on a threshold maps to the lower cell.
Quantized quantize(const ScalarCodebook& codebook, double x);

std::string to_json(const ScalarCodebook& codebook);
ScalarCodebook codebook_from_json(const std::string& text);

struct QuantizerGap {
    double ideal_distortion;      ///< idealized hybrid simulation at R(alpha)
    double realized_distortion;   ///< same pipeline with the trained quantizer
    double gap_ratio;             ///< realized / ideal
    /// Ideal quantizer at the codebook's own rate log2(L), through the same
    /// channel (closed form). Compares the two quantizers at equal rate.
    double rate_matched_ideal_distortion;
    double rate_matched_ratio;
    EstimatorStats realized;
    ScalarCodebook codebook;
};

/// Trains a num_levels codebook on Gaussian(0, source_var) samples and reruns
/// the hybrid pipeline with u = v - Q(v). Design region only.
QuantizerGap hybrid_quantizer_gap(const SystemConfig& config, const ChannelPoint& point,
                                  int num_levels, const MonteCarloSettings& settings,
                                  unsigned threads = 0);

}  // namespace wiretap
