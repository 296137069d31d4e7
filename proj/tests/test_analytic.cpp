#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wiretap/analytic.hpp"

using namespace wiretap;
using oracle::rel_err;

namespace {

ChannelPoint at_db(const SystemConfig& c, double db) { return ChannelPoint::from_snr_db(c, db); }

// Bisection on the leakage bound 0.5 log2(1 + (1-a)P/se2) = I, independent of
// the closed-form solver.
double alpha_by_bisection(const SystemConfig& c)
{
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double leak = 0.5 * std::log2(1.0 + (1.0 - mid) * c.power / c.noise_var_eve);
        (leak > c.leakage_budget_bits ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("separation rate")
{
    CHECK(rel_err(separation_rate(oracle::fig2()).rate_bits, oracle::kSeparationRate) < 1e-13);
    CHECK(rel_err(separation_rate({1.0, 0.1, 1.0, 1.0, 0.1}).rate_bits, oracle::kSeparationRateAlt) < 1e-13);

    SystemConfig nearly_equal{1.0, 0.999999, 1.0, 1.0, 0.0};
    const double r = separation_rate(nearly_equal).rate_bits;
    CHECK(r > 0.0);
    CHECK(r < 1e-6);

    CHECK_THROWS_AS(separation_rate({1.0, 2.0, 1.0, 1.0, 0.0}), ValidationError);
}

TEST_CASE("separation rate meets the secrecy-coding rate bound with equality")
{
    // R_v * H(Vq|Ye)/H(Vq) = R_v - I must equal C(P/s2) - C(P/se2).
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_valid_config(rng);
        const double rv = separation_rate(c).rate_bits;
        const double secrecy_capacity = capacity(c.snr_design()) - capacity(c.snr_eve());
        CHECK(rv - c.leakage_budget_bits == doctest::Approx(secrecy_capacity).epsilon(1e-12));
    }
}

TEST_CASE("separation distortion")
{
    const auto c = oracle::fig2();
    CHECK(rel_err(separation_distortion(c, at_db(c, 20)).distortion, oracle::kDesignDistortion) < 1e-12);
    CHECK(rel_err(separation_distortion(c, at_db(c, 40)).distortion, oracle::kDesignDistortion) < 1e-12);
    const auto outage = separation_distortion(c, at_db(c, 10));
    CHECK(outage.distortion == c.source_var);
    CHECK(outage.leakage_bound_bits == c.leakage_budget_bits);
}

TEST_CASE("uncoded kappa and leakage")
{
    const auto c = oracle::fig2();
    const double k = uncoded_kappa(c).kappa;
    CHECK(rel_err(k * k, oracle::kKappaSquared) < 1e-12);
    CHECK(uncoded_leakage(c, k) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(uncoded_leakage(c, 0.0) == 0.0);
    CHECK(uncoded_leakage(c, 1.0) == doctest::Approx(0.5).epsilon(1e-15));  // full power, P = se2 = 1
    CHECK_THROWS_AS(uncoded_leakage(c, -0.1), DomainError);

    SystemConfig silent = c;
    silent.leakage_budget_bits = 0.0;
    CHECK(uncoded_kappa(silent).kappa == 0.0);

    SystemConfig half = c;
    half.leakage_budget_bits = 0.5;
    const double kh = uncoded_kappa(half).kappa;
    CHECK(kh * kh == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uncoded distortion")
{
    const auto c = oracle::fig2();
    const auto p = uncoded_kappa(c);
    for (const auto& pt : oracle::kCurve)
        CHECK(rel_err(uncoded_distortion(c, p, at_db(c, pt.snr_db)).distortion, pt.uncoded) < 1e-12);
    // No outage region for the analog scheme.
    CHECK(uncoded_distortion(c, p, at_db(c, 10)).distortion < c.source_var);
    CHECK(uncoded_distortion(c, {0.0}, at_db(c, 50)).distortion == c.source_var);
}

TEST_CASE("hybrid alpha solver")
{
    const auto c = oracle::fig2();
    const auto h = hybrid_alpha(c);
    CHECK(rel_err(h.alpha, oracle::kAlpha) < 1e-13);
    CHECK(h.alpha == doctest::Approx(alpha_by_bisection(c)).epsilon(1e-12));
    CHECK(rel_err(h.rate_bits, oracle::kHybridRate) < 1e-12);
    CHECK(h.beta_mmse == doctest::Approx((1 - h.alpha) / ((1 - h.alpha) + 1.0)).epsilon(1e-14));
    // Analog layer meets its power share exactly.
    CHECK(h.residual_scale * h.residual_scale * oracle::kResidualVar ==
          doctest::Approx((1.0 - h.alpha) * c.power).epsilon(1e-12));

    SystemConfig zero = c;
    zero.leakage_budget_bits = 0.0;
    CHECK(hybrid_alpha(zero).alpha == 1.0);
    CHECK(hybrid_alpha(zero).residual_scale == 0.0);

    SystemConfig quarter = c;
    quarter.leakage_budget_bits = 0.25;
    CHECK(1.0 - hybrid_alpha(quarter).alpha == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-13));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto r = oracle::random_valid_config(rng);
        CHECK(hybrid_alpha(r).alpha == doctest::Approx(alpha_by_bisection(r)).epsilon(1e-10));
    }
}

TEST_CASE("hybrid rate")
{
    const auto c = oracle::fig2();
    CHECK(hybrid_rate(c, 0.0) == 0.0);
    CHECK(rel_err(hybrid_rate(c, 1.0), oracle::kHybridRateAlphaOne) < 1e-13);
    CHECK_THROWS_AS(hybrid_rate(c, 1.5), DomainError);
    CHECK_THROWS_AS(hybrid_rate(c, -0.1), DomainError);
}

TEST_CASE("hybrid distortion")
{
    const auto c = oracle::fig2();
    const auto h = hybrid_alpha(c);
    for (const auto& pt : oracle::kCurve)
        CHECK(rel_err(hybrid_distortion(c, h, at_db(c, pt.snr_db)).distortion, pt.hybrid) < 1e-12);
    CHECK(hybrid_distortion(c, h, at_db(c, 15)).distortion == c.source_var);
    CHECK(hybrid_distortion(c, h, at_db(c, 20)).leakage_bound_bits == doctest::Approx(0.01).epsilon(1e-12));

    const auto pure_digital = hybrid_params_for_alpha(c, 1.0);
    CHECK(rel_err(hybrid_distortion(c, pure_digital, at_db(c, 20)).distortion,
                  std::exp2(-2.0 * oracle::kHybridRateAlphaOne)) < 1e-12);
}

TEST_CASE("outer bound")
{
    const auto c = oracle::fig2();
    for (const auto& pt : oracle::kCurve)
        CHECK(rel_err(outer_bound_distortion(c, at_db(c, pt.snr_db)).distortion, pt.outer) < 1e-12);

    SystemConfig zero = c;
    zero.leakage_budget_bits = 0.0;
    const auto at_eve = ChannelPoint::from_noise_var(zero, zero.noise_var_eve);
    CHECK(outer_bound_distortion(zero, at_eve).distortion == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(outer_bound_distortion(c, ChannelPoint::from_noise_var(c, 2.0)), DomainError);
}

TEST_CASE("eavesdropper floor")
{
    CHECK(rel_err(eavesdropper_distortion_floor(oracle::fig2()), oracle::kEveFloor) < 1e-14);
    CHECK(eavesdropper_distortion_floor({1, 0.01, 1, 1, 0.0}) == 1.0);
    CHECK(eavesdropper_distortion_floor({4, 0.01, 1, 4, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("properties over random configs and SNR grids")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_valid_config(rng);
        const auto kappa = uncoded_kappa(c);
        const auto h = hybrid_alpha(c);
        const double ratio = std::exp2(-2.0 * h.rate_bits);

        const auto design = ChannelPoint::from_noise_var(c, c.noise_var_design);
        const double sep_d = separation_distortion(c, design).distortion;
        const double hyb_d = hybrid_distortion(c, h, design).distortion;
        CHECK(rel_err(hyb_d, sep_d) < 1e-12);
        CHECK(outer_bound_distortion(c, design).distortion == doctest::Approx(sep_d).epsilon(1e-12));

        double prev_u = 2.0 * c.source_var, prev_h = prev_u, prev_s = prev_u;
        std::vector<double> noise(20);
        for (auto& n : noise)
            n = c.noise_var_design * std::pow(10.0, -5.0 * u(rng));
        std::sort(noise.begin(), noise.end(), std::greater<>());
        for (double n : noise) {
            const auto pt = ChannelPoint::from_noise_var(c, n);
            const auto du = uncoded_distortion(c, kappa, pt);
            const auto dh = hybrid_distortion(c, h, pt);
            const auto ds = separation_distortion(c, pt);
            const auto dout = outer_bound_distortion(c, pt);
            CHECK(rel_err(dh.distortion, du.distortion * ratio) < 1e-12);
            for (const auto& d : {du, dh, ds}) {
                CHECK(dout.distortion <= d.distortion * (1 + 1e-12));
                CHECK(d.leakage_bound_bits <= c.leakage_budget_bits + 1e-9);
                CHECK(d.distortion > 0.0);
                CHECK(d.distortion <= c.source_var);
            }
            CHECK(du.distortion <= prev_u);
            CHECK(dh.distortion <= prev_h);
            CHECK(ds.distortion <= prev_s);
            prev_u = du.distortion;
            prev_h = dh.distortion;
            prev_s = ds.distortion;
        }
        CHECK(uncoded_leakage(c, kappa.kappa) == doctest::Approx(c.leakage_budget_bits).epsilon(1e-9));
    }
}

TEST_CASE("distortion exponent")
{
    std::vector<SnrDistortion> power_law;
    for (double s : {10.0, 100.0, 1000.0, 1e4})
        power_law.push_back({s, 3.0 / s});
    CHECK(distortion_exponent(power_law) == doctest::Approx(-1.0).epsilon(1e-14));

    std::vector<SnrDistortion> flat{{10, 0.2}, {100, 0.2}, {1000, 0.2}};
    CHECK(distortion_exponent(flat) == 0.0);

    std::vector<SnrDistortion> one{{10, 0.2}};
    CHECK_THROWS_AS(distortion_exponent(one), DomainError);
    std::vector<SnrDistortion> repeated{{10, 0.2}, {10, 0.1}};
    CHECK_THROWS_AS(distortion_exponent(repeated), DomainError);
    std::vector<SnrDistortion> zero{{10, 0.2}, {20, 0.0}};
    CHECK_THROWS_AS(distortion_exponent(zero), DomainError);

    const auto c = oracle::fig2();
    const double unc = analytic_exponent(c, Scheme::Uncoded);
    CHECK(unc >= -1.0);
    CHECK(unc <= -0.98);
    CHECK(analytic_exponent(c, Scheme::Hybrid) == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(analytic_exponent(c, Scheme::OuterBound) == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(std::abs(analytic_exponent(c, Scheme::Separation)) <= 0.01);
}

TEST_CASE("scheme names")
{
    for (Scheme s : {Scheme::Separation, Scheme::Uncoded, Scheme::Hybrid, Scheme::OuterBound})
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(scheme_from_string("analog"), ValidationError);
}
