#include "wiretap/analytic.hpp"

#include <cmath>
#include <string>

namespace wiretap {

std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::Separation: return "separation";
    case Scheme::Uncoded: return "uncoded";
    case Scheme::Hybrid: return "hybrid";
    case Scheme::OuterBound: return "outer_bound";
    }
    return "unknown";
}

std::string_view to_string(Provenance p)
{
    return p == Provenance::Analytic ? "analytic" : "montecarlo";
}

Scheme scheme_from_string(std::string_view name)
{
    for (Scheme s : {Scheme::Separation, Scheme::Uncoded, Scheme::Hybrid, Scheme::OuterBound})
        if (to_string(s) == name)
            return s;
    throw ValidationError("unknown scheme '" + std::string(name) + "'");
}

namespace {

double leakage_of_analog_power(const SystemConfig& c, double analog_power)
{
    return capacity(analog_power / c.noise_var_eve);
}

}  // namespace

SeparationParams separation_rate(const SystemConfig& config)
{
    const auto& c = validate(config);
    return {capacity(c.snr_design()) - capacity(c.snr_eve()) + c.leakage_budget_bits};
}

DistortionPoint separation_distortion(const SystemConfig& config, const ChannelPoint& point)
{
    const auto& c = validate(config);
    // Below design SNR the secrecy code cannot be decoded; the receiver falls
    // back to the source mean.
    const double d = point.in_design_region()
                         ? c.source_var * std::exp2(-2.0 * separation_rate(c).rate_bits)
                         : c.source_var;
    return {point.snr_a(), d, c.leakage_budget_bits, Scheme::Separation, Provenance::Analytic};
}

UncodedParams uncoded_kappa(const SystemConfig& config)
{
    const auto& c = validate(config);
    const double k2 = c.leakage_power() / c.source_var;
    if (k2 * c.source_var > c.power)
        throw ValidationError({{ConfigViolation::InfeasibleLeakageBudget, "leakage_budget_bits",
                                "scaling would exceed the transmit power"}});
    return {std::sqrt(k2)};
}

double uncoded_leakage(const SystemConfig& config, double kappa)
{
    const auto& c = validate(config);
    if (!(kappa >= 0.0))
        throw DomainError("kappa must be non-negative");
    return leakage_of_analog_power(c, kappa * kappa * c.source_var);
}

DistortionPoint uncoded_distortion(const SystemConfig& config, const UncodedParams& params,
                                   const ChannelPoint& point)
{
    const auto& c = validate(config);
    const double signal = params.kappa * params.kappa * c.source_var;
    return {point.snr_a(), c.source_var / (1.0 + signal / point.noise_var_actual()),
            uncoded_leakage(c, params.kappa), Scheme::Uncoded, Provenance::Analytic};
}

double hybrid_rate(const SystemConfig& config, double alpha)
{
    const auto& c = validate(config);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in [0, 1]");
    const double digital = alpha * c.power;
    const double analog = (1.0 - alpha) * c.power;
    const double r = capacity(digital / (analog + c.noise_var_design)) -
                     capacity(digital / (analog + c.noise_var_eve));
    return r > 0.0 ? r : 0.0;
}

HybridParams hybrid_params_for_alpha(const SystemConfig& config, double alpha)
{
    const auto& c = validate(config);
    const double rate = hybrid_rate(c, alpha);
    const double analog = (1.0 - alpha) * c.power;
    const double residual_var = c.source_var * std::exp2(-2.0 * rate);
    return {alpha, rate, std::sqrt(analog / residual_var), analog / (analog + c.noise_var_eve)};
}

HybridParams hybrid_alpha(const SystemConfig& config)
{
    const auto& c = validate(config);
    const double alpha = 1.0 - c.leakage_power() / c.power;
    if (alpha < 0.0)
        throw ValidationError({{ConfigViolation::InfeasibleLeakageBudget, "leakage_budget_bits",
                                "analog layer would need more than the transmit power"}});
    return hybrid_params_for_alpha(c, alpha);
}

DistortionPoint hybrid_distortion(const SystemConfig& config, const HybridParams& params,
                                  const ChannelPoint& point)
{
    const auto& c = validate(config);
    const double analog = (1.0 - params.alpha) * c.power;
    const double d = point.in_design_region()
                         ? c.source_var * std::exp2(-2.0 * params.rate_bits) /
                               (1.0 + analog / point.noise_var_actual())
                         : c.source_var;
    return {point.snr_a(), d, leakage_of_analog_power(c, analog), Scheme::Hybrid,
            Provenance::Analytic};
}

DistortionPoint outer_bound_distortion(const SystemConfig& config, const ChannelPoint& point)
{
    const auto& c = validate(config);
    if (point.noise_var_actual() > c.noise_var_eve)
        throw DomainError("outer bound needs the main channel to be no worse than the eavesdropper's");
    const double rate =
        capacity(point.snr_a()) - capacity(c.snr_eve()) + c.leakage_budget_bits;
    return {point.snr_a(), c.source_var * std::exp2(-2.0 * rate), c.leakage_budget_bits,
            Scheme::OuterBound, Provenance::Analytic};
}

double eavesdropper_distortion_floor(const SystemConfig& config)
{
    const auto& c = validate(config);
    return c.source_var * std::exp2(-2.0 * c.leakage_budget_bits);
}

DistortionPoint analytic_distortion(const SystemConfig& config, Scheme scheme,
                                    const ChannelPoint& point)
{
    switch (scheme) {
    case Scheme::Separation: return separation_distortion(config, point);
    case Scheme::Uncoded: return uncoded_distortion(config, uncoded_kappa(config), point);
    case Scheme::Hybrid: return hybrid_distortion(config, hybrid_alpha(config), point);
    case Scheme::OuterBound: return outer_bound_distortion(config, point);
    }
    throw DomainError("unknown scheme");
}

double distortion_exponent(std::span<const SnrDistortion> points)
{
    if (points.size() < 2)
        throw DomainError("distortion exponent needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.snr_linear > 0.0) || !(p.distortion > 0.0))
            throw DomainError("SNR and distortion must be positive");
        if (i > 0 && !(p.snr_linear > points[i - 1].snr_linear))
            throw DomainError("SNR values must be strictly increasing");
        mx += std::log2(p.snr_linear);
        my += std::log2(p.distortion);
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : points) {
        const double dx = std::log2(p.snr_linear) - mx;
        sxy += dx * (std::log2(p.distortion) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double analytic_exponent(const SystemConfig& config, Scheme scheme, double start_db,
                         double stop_db, int count)
{
    if (count < 2 || !(stop_db > start_db))
        throw DomainError("exponent window needs two or more points over a non-empty range");
    std::vector<SnrDistortion> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double db = start_db + (stop_db - start_db) * i / (count - 1);
        const auto point = ChannelPoint::from_snr_db(config, db);
        pts.push_back({point.snr_a(), analytic_distortion(config, scheme, point).distortion});
    }
    return distortion_exponent(pts);
}

}  // namespace wiretap
