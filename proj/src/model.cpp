#include "wiretap/model.hpp"

#include <cmath>
#include <sstream>

namespace wiretap {

const char* to_string(ConfigViolation v)
{
    switch (v) {
    case ConfigViolation::NonPositiveParameter: return "NonPositiveParameter";
    case ConfigViolation::EveNotDegraded: return "EveNotDegraded";
    case ConfigViolation::InfeasibleLeakageBudget: return "InfeasibleLeakageBudget";
    }
    return "Unknown";
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << to_string(issues[i].kind) << " (" << issues[i].field << "): " << issues[i].message;
    }
    return os.str();
}

// Equality at exactly SNR_d must survive the dB -> linear round trip.
constexpr double kDesignRegionSlack = 1e-12;

}  // namespace

ValidationError::ValidationError(std::vector<ConfigIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues))
{
}

ValidationError::ValidationError(const std::string& message) : Error(message) {}

double SystemConfig::leakage_power() const
{
    return noise_var_eve * std::expm1(2.0 * leakage_budget_bits * std::log(2.0));
}

ChannelPoint ChannelPoint::from_noise_var(const SystemConfig& config, double noise_var_actual)
{
    if (!(noise_var_actual > 0.0) || !std::isfinite(noise_var_actual))
        throw DomainError("actual noise variance must be positive and finite");
    const bool in_region =
        noise_var_actual <= config.noise_var_design * (1.0 + kDesignRegionSlack);
    return ChannelPoint(noise_var_actual, config.power / noise_var_actual, in_region);
}

ChannelPoint ChannelPoint::from_snr_db(const SystemConfig& config, double snr_db)
{
    return from_noise_var(config, config.power / snr_db_to_linear(snr_db));
}

double ChannelPoint::snr_a_db() const { return snr_linear_to_db(snr_a_); }

double capacity(double x)
{
    if (!(x >= 0.0))
        throw DomainError("capacity: argument must be non-negative");
    return 0.5 * std::log2(1.0 + x);
}

double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double snr_linear_to_db(double lin)
{
    if (!(lin > 0.0))
        throw DomainError("linear SNR must be positive");
    return 10.0 * std::log10(lin);
}

std::vector<ConfigIssue> find_violations(const SystemConfig& c)
{
    std::vector<ConfigIssue> issues;
    auto positive = [&](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            issues.push_back({ConfigViolation::NonPositiveParameter, field,
                              "must be strictly positive and finite"});
            return false;
        }
        return true;
    };
    const bool p_ok = positive(c.power, "power");
    const bool d_ok = positive(c.noise_var_design, "noise_var_design");
    const bool e_ok = positive(c.noise_var_eve, "noise_var_eve");
    positive(c.source_var, "source_var");
    const bool i_ok = c.leakage_budget_bits >= 0.0 && std::isfinite(c.leakage_budget_bits);
    if (!i_ok)
        issues.push_back({ConfigViolation::NonPositiveParameter, "leakage_budget_bits",
                          "must be non-negative and finite"});

    if (d_ok && e_ok && !(c.noise_var_design < c.noise_var_eve))
        issues.push_back({ConfigViolation::EveNotDegraded, "noise_var_eve",
                          "eavesdropper noise variance must exceed the design noise variance"});
    if (p_ok && e_ok && i_ok && c.leakage_power() > c.power)
        issues.push_back({ConfigViolation::InfeasibleLeakageBudget, "leakage_budget_bits",
                          "noise_var_eve * (2^(2I) - 1) exceeds the transmit power"});
    return issues;
}

const SystemConfig& validate(const SystemConfig& config)
{
    auto issues = find_violations(config);
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    return config;
}

}  // namespace wiretap
