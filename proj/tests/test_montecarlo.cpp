#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wiretap/montecarlo.hpp"

using namespace wiretap;

namespace {

MonteCarloSettings million(std::uint64_t seed = 1) { return {1000, 1000, seed}; }

ChannelPoint at_db(const SystemConfig& c, double db) { return ChannelPoint::from_snr_db(c, db); }

}  // namespace

TEST_CASE("uncoded batch structure")
{
    const auto c = oracle::fig2();
    const auto k = uncoded_kappa(c);
    const auto b = draw_uncoded_batch(c, k, at_db(c, 25), 3, 7, 256);
    REQUIRE(b.source.size() == 256);
    for (std::size_t i = 0; i < b.source.size(); ++i) {
        CHECK(b.channel_input[i] == k.kappa * b.source[i]);
        CHECK(b.quantized[i] + b.residual[i] == b.source[i]);
        CHECK(b.main_rx[i] == b.channel_input[i] + b.main_noise[i]);
        CHECK(b.eve_rx[i] == b.channel_input[i] + b.eve_noise[i]);
    }
}

TEST_CASE("hybrid batch structure")
{
    const auto c = oracle::fig2();
    const auto h = hybrid_alpha(c);
    const auto b = draw_hybrid_batch(c, h, at_db(c, 25), 3, 7, 256);
    for (std::size_t i = 0; i < b.source.size(); ++i) {
        CHECK(b.source[i] == b.quantized[i] + b.residual[i]);
        CHECK(b.channel_input[i] == b.digital_signal[i] + h.residual_scale * b.residual[i]);
    }
    // Substreams are keyed by trial: a different trial gives different data,
    // the same trial gives the same data.
    const auto again = draw_hybrid_batch(c, h, at_db(c, 25), 3, 7, 256);
    const auto other = draw_hybrid_batch(c, h, at_db(c, 25), 3, 8, 256);
    CHECK(again.source == b.source);
    CHECK(other.source != b.source);
}

TEST_CASE("empirical covariance")
{
    const std::vector<double> x{1, -1, 2, -2}, y{2, -2, 4, -4};
    const auto cov = empirical_covariance(x, y);
    // mean 0; sum x^2 = 10, sum xy = 20, sum y^2 = 40; divide by n - 1 = 3.
    CHECK(cov[0][0] == doctest::Approx(10.0 / 3.0));
    CHECK(cov[0][1] == doctest::Approx(20.0 / 3.0));
    CHECK(cov[1][0] == cov[0][1]);
    CHECK(cov[1][1] == doctest::Approx(40.0 / 3.0));

    const auto same = empirical_covariance(x, x);
    CHECK(same[0][1] * same[0][1] == doctest::Approx(same[0][0] * same[1][1]));
    CHECK_THROWS_AS(gaussian_mi_from_cov(same), DomainError);

    const auto a = gaussian_block(9, 0, StreamRole::Source, 1.0, 1'000'000);
    const auto b = gaussian_block(9, 0, StreamRole::MainNoise, 1.0, 1'000'000);
    CHECK(std::abs(empirical_covariance(a, b)[0][1]) < 5.0 / 1000.0);

    CHECK_THROWS_AS(empirical_covariance(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(empirical_covariance(x, std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("gaussian MI from covariance")
{
    CHECK(gaussian_mi_from_cov({{{2.0, 0.0}, {0.0, 5.0}}}) == 0.0);
    // rho^2 = 0.75
    CHECK(gaussian_mi_from_cov({{{1.0, std::sqrt(0.75)}, {std::sqrt(0.75), 1.0}}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Uncoded pair (V, Y_e) from the population covariance.
    const double k2 = oracle::kKappaSquared;
    const double k = std::sqrt(k2);
    CHECK(gaussian_mi_from_cov({{{1.0, k}, {k, k2 + 1.0}}}) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_mi_from_cov({{{-1.0, 0.0}, {0.0, 1.0}}}), DomainError);
}

TEST_CASE("uncoded simulation matches the closed form")
{
    const auto c = oracle::fig2();
    for (const auto& pt : oracle::kCurve) {
        const auto r = run_uncoded(c, at_db(c, pt.snr_db), million(pt.snr_db));
        CHECK(r.point.provenance == Provenance::MonteCarlo);
        CHECK(r.distortion.sample_count == 1'000'000);
        CHECK(std::abs(r.distortion.mean - pt.uncoded) <= 5.0 * r.distortion.std_error);
        // Power: kappa^2 sigma_v^2.
        CHECK(std::abs(r.input_power.mean - oracle::kKappaSquared) <= 5.0 * r.input_power.std_error);
        CHECK(std::abs(r.orthogonality.mean) <= 5.0 * r.orthogonality.std_error);
    }
    const auto r = run_uncoded(c, at_db(c, 20), million());
    CHECK(oracle::rel_err(r.distortion.mean, oracle::kCurve[0].uncoded) < 0.01);
}

TEST_CASE("uncoded corner cases")
{
    auto c = oracle::fig2();
    c.leakage_budget_bits = 0.0;
    const auto silent = run_uncoded(c, at_db(c, 30), {1000, 100, 4});
    CHECK(std::abs(silent.distortion.mean - 1.0) <= 5.0 * silent.distortion.std_error);
    CHECK(silent.input_power.mean == 0.0);

    const auto noiseless = run_uncoded(oracle::fig2(), ChannelPoint::from_noise_var(oracle::fig2(), 1e-12),
                                       {1000, 100, 4});
    CHECK(noiseless.distortion.mean < 1e-9);
}

TEST_CASE("idealized hybrid simulation matches the closed form")
{
    const auto c = oracle::fig2();
    const auto h = hybrid_alpha(c);
    for (const auto& pt : oracle::kCurve) {
        const auto r = run_hybrid_idealized(c, h, at_db(c, pt.snr_db), million(100 + pt.snr_db));
        CHECK(std::abs(r.distortion.mean - pt.hybrid) <= 5.0 * r.distortion.std_error);
        CHECK(std::abs(r.input_power.mean - c.power) <= 5.0 * r.input_power.std_error);
        CHECK(std::abs(r.orthogonality.mean) <= 5.0 * r.orthogonality.std_error);
        // Test channel: var(u) = D_q, cov(v_q, u) = 0.
        CHECK(oracle::rel_err(r.residual_var, oracle::kResidualVar) < 5.0 * std::sqrt(2.0 / 1e6));
        CHECK(std::abs(r.quantized_residual_cov) < 5.0 * std::sqrt(oracle::kResidualVar) / 1000.0);
    }
}

TEST_CASE("idealized hybrid corner cases")
{
    const auto c = oracle::fig2();
    const auto h = hybrid_alpha(c);
    CHECK_THROWS_AS(run_hybrid_idealized(c, h, at_db(c, 19), million()), OutOfDesignRegion);

    const auto digital_only = hybrid_params_for_alpha(c, 1.0);
    const auto r = run_hybrid_idealized(c, digital_only, at_db(c, 20), million(3));
    const double dq = std::exp2(-2.0 * oracle::kHybridRateAlphaOne);
    CHECK(std::abs(r.distortion.mean - dq) <= 5.0 * r.distortion.std_error);
}

TEST_CASE("empirical leakage")
{
    const auto c = oracle::fig2();
    const auto [bits, stats] = empirical_leakage(c, Scheme::Uncoded, at_db(c, 20), million());
    CHECK(std::abs(bits - 0.01) <= 0.002);
    CHECK(stats.std_error > 0.0);

    const auto [hbits, hstats] = empirical_leakage(c, Scheme::Hybrid, at_db(c, 20), million(2));
    CHECK(std::abs(hbits - oracle::kHybridEmpiricalMi) <= 5.0 * hstats.std_error);
    CHECK(hbits <= 0.01 + 5.0 * hstats.std_error);

    auto zero = c;
    zero.leakage_budget_bits = 0.0;
    const auto [zbits, zstats] = empirical_leakage(zero, Scheme::Uncoded, at_db(zero, 20), million());
    CHECK(zbits <= 5.0 * zstats.std_error);

    CHECK_THROWS_AS(empirical_leakage(c, Scheme::Separation, at_db(c, 20), million()), DomainError);
}

TEST_CASE("leakage ordering across SNR")
{
    const auto c = oracle::fig2();
    const double bound = capacity((1.0 - hybrid_alpha(c).alpha) * c.power / c.noise_var_eve);
    for (double db : {20.0, 30.0, 40.0}) {
        const auto [bits, stats] = empirical_leakage(c, Scheme::Hybrid, at_db(c, db), {1000, 300, 17});
        CHECK(bits <= bound + 5.0 * stats.std_error);
    }
}

TEST_CASE("orthogonality check detects a biased estimator")
{
    const auto c = oracle::fig2();
    const auto k = uncoded_kappa(c);
    const auto point = at_db(c, 20);
    const double gain = k.kappa / (k.kappa * k.kappa + point.noise_var_actual());
    std::vector<double> mmse_res, half_res, obs;
    for (std::int64_t t = 0; t < 200; ++t) {
        const auto b = draw_uncoded_batch(c, k, point, 21, t, 5000);
        for (std::size_t i = 0; i < b.source.size(); ++i) {
            mmse_res.push_back(b.source[i] - gain * b.main_rx[i]);
            half_res.push_back(b.source[i] - 0.5 * gain * b.main_rx[i]);
            obs.push_back(b.main_rx[i]);
        }
    }
    const auto good = mmse_orthogonality_check(mmse_res, obs);
    CHECK(std::abs(good.mean) <= 5.0 * good.std_error);

    // E[(v - g/2 y) y] = kappa sigma_v^2 - (g/2)(kappa^2 sigma_v^2 + sigma_a^2) = kappa / 2.
    const auto bad = mmse_orthogonality_check(half_res, obs);
    const double expected = 0.5 * k.kappa;
    CHECK(std::abs(bad.mean - expected) <= 5.0 * bad.std_error);
    CHECK(std::abs(bad.mean) > 20.0 * bad.std_error);

    const std::vector<double> zeros(10, 0.0), ones(10, 1.0);
    CHECK(mmse_orthogonality_check(ones, zeros).mean == 0.0);
    CHECK(mmse_orthogonality_check({}, {}).sample_count == 0);
}

TEST_CASE("results do not depend on the worker count")
{
    const auto c = oracle::fig2();
    const MonteCarloSettings s{517, 61, 42};
    const auto one = run_hybrid_idealized(c, hybrid_alpha(c), at_db(c, 27), s, 1);
    const auto many = run_hybrid_idealized(c, hybrid_alpha(c), at_db(c, 27), s, 7);
    CHECK(one.distortion.mean == many.distortion.mean);
    CHECK(one.distortion.std_error == many.distortion.std_error);
    CHECK(one.leakage.mean == many.leakage.mean);
    CHECK(one.source_eve_cov == many.source_eve_cov);

    const auto u1 = run_uncoded(c, at_db(c, 33), s, 1);
    const auto u3 = run_uncoded(c, at_db(c, 33), s, 3);
    CHECK(u1.distortion.mean == u3.distortion.mean);
    CHECK(u1.orthogonality.mean == u3.orthogonality.mean);

    const auto other_seed = run_uncoded(c, at_db(c, 33), {517, 61, 43}, 3);
    CHECK(other_seed.distortion.mean != u1.distortion.mean);
}

TEST_CASE("settings are checked")
{
    const auto c = oracle::fig2();
    CHECK_THROWS_AS(run_uncoded(c, at_db(c, 20), {0, 10, 1}), DomainError);
    CHECK_THROWS_AS(run_uncoded(c, at_db(c, 20), {10, 0, 1}), DomainError);
    CHECK_THROWS_AS(run_uncoded(c, at_db(c, 20), {100'000, 10'000, 1}), SampleBudgetExceeded);
    MonteCarloSettings tight{100, 100, 1, 5000};
    CHECK_THROWS_AS(check_settings(tight), SampleBudgetExceeded);
}
