#pragma once

// Problem instance for an analog Gaussian source sent over a degraded
// Gaussian wiretap channel. All rates and leakages are in bits per channel use.

#include <vector>

#include "wiretap/error.hpp"

namespace wiretap {

struct SystemConfig {
    double power = 1.0;                ///< transmit power P
    double noise_var_design = 0.01;    ///< design main-channel noise variance
    double noise_var_eve = 1.0;        ///< eavesdropper noise variance
    double source_var = 1.0;           ///< source variance
    double leakage_budget_bits = 0.01; ///< allowed I(V;Y_e) per use

    double snr_design() const { return power / noise_var_design; }
    double snr_eve() const { return power / noise_var_eve; }

    /// Power needed by an analog layer whose leakage equals the budget,
    /// i.e. noise_var_eve * (2^{2 I} - 1).
    double leakage_power() const;
};

/// Actual main-channel condition seen by the intended receiver. The
/// transmitter only knows the design noise variance.
class ChannelPoint {
public:
    static ChannelPoint from_noise_var(const SystemConfig& config, double noise_var_actual);
    static ChannelPoint from_snr_db(const SystemConfig& config, double snr_db);

    double noise_var_actual() const { return noise_var_actual_; }
    double snr_a() const { return snr_a_; }
    double snr_a_db() const;
    bool in_design_region() const { return in_design_region_; }

private:
    ChannelPoint(double noise_var, double snr, bool in_region)
        : noise_var_actual_(noise_var), snr_a_(snr), in_design_region_(in_region) {}

    double noise_var_actual_;
    double snr_a_;
    bool in_design_region_;
};

/// 0.5 * log2(1 + x). Throws DomainError for x < 0.
double capacity(double x);

double snr_db_to_linear(double db);
/// Throws DomainError for lin <= 0.
double snr_linear_to_db(double lin);

/// Every violated invariant; empty when the configuration is usable.
std::vector<ConfigIssue> find_violations(const SystemConfig& config);

/// Returns the config unchanged or throws ValidationError listing all issues.
const SystemConfig& validate(const SystemConfig& config);

}  // namespace wiretap
