#pragma once

// Closed-form rates, distortions, and leakages for the separation, uncoded
// (scaling), and hybrid digital/analog schemes, plus the genie-aided outer
// bound. Every function validates its SystemConfig first.

#include <span>
#include <string_view>
#include <utility>

#include "wiretap/model.hpp"

namespace wiretap {

enum class Scheme { Separation, Uncoded, Hybrid, OuterBound };
enum class Provenance { Analytic, MonteCarlo };

std::string_view to_string(Scheme s);
std::string_view to_string(Provenance p);
/// Accepts "separation", "uncoded", "hybrid", "outer_bound".
Scheme scheme_from_string(std::string_view name);

struct SeparationParams {
    double rate_bits;
};

struct UncodedParams {
    double kappa;
};

struct HybridParams {
    double alpha;           ///< fraction of power given to the digital layer
    double rate_bits;       ///< quantizer rate R(alpha)
    double residual_scale;  ///< gain applied to the quantization error
    double beta_mmse;       ///< eavesdropper-side MMSE coefficient of the analog layer
};

struct DistortionPoint {
    double snr_a_linear;
    double distortion;
    double leakage_bound_bits;
    Scheme scheme;
    Provenance provenance;
};

SeparationParams separation_rate(const SystemConfig& config);
DistortionPoint separation_distortion(const SystemConfig& config, const ChannelPoint& point);

UncodedParams uncoded_kappa(const SystemConfig& config);
double uncoded_leakage(const SystemConfig& config, double kappa);
DistortionPoint uncoded_distortion(const SystemConfig& config, const UncodedParams& params,
                                   const ChannelPoint& point);

/// R(alpha) = C(aP / ((1-a)P + s2)) - C(aP / ((1-a)P + se2)).
double hybrid_rate(const SystemConfig& config, double alpha);

/// Solves the leakage bound 0.5 log2(1 + (1-a)P/se2) = I for alpha.
HybridParams hybrid_alpha(const SystemConfig& config);

/// Parameters for an arbitrary power split, for exploring alpha by hand.
HybridParams hybrid_params_for_alpha(const SystemConfig& config, double alpha);

DistortionPoint hybrid_distortion(const SystemConfig& config, const HybridParams& params,
                                  const ChannelPoint& point);

/// Genie-aided separation at the actual SNR. Requires noise_var_actual <= noise_var_eve.
DistortionPoint outer_bound_distortion(const SystemConfig& config, const ChannelPoint& point);

/// Lower bound on the eavesdropper's reconstruction error, source_var * 2^{-2I}.
double eavesdropper_distortion_floor(const SystemConfig& config);

/// Analytic distortion of any scheme at one channel point.
DistortionPoint analytic_distortion(const SystemConfig& config, Scheme scheme,
                                    const ChannelPoint& point);

struct SnrDistortion {
    double snr_linear;
    double distortion;
};

/// Least-squares slope of log2(D) against log2(SNR). Needs two or more
/// points with strictly increasing SNR and positive distortion.
double distortion_exponent(std::span<const SnrDistortion> points);

/// Slope of a scheme's analytic curve sampled at `count` evenly spaced dB
/// values in [start_db, stop_db].
double analytic_exponent(const SystemConfig& config, Scheme scheme, double start_db = 30.0,
                         double stop_db = 50.0, int count = 5);

}  // namespace wiretap
