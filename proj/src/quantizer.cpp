#include "wiretap/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace wiretap {

namespace {

using Cells = std::vector<std::size_t>;  // end offset of each cell in the sorted samples

std::vector<double> midpoints(const std::vector<double>& levels)
{
    std::vector<double> t(levels.size() - 1);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        t[i] = 0.5 * (levels[i] + levels[i + 1]);
    return t;
}

Cells partition(std::span<const double> sorted, const std::vector<double>& thresholds)
{
    Cells ends;
    ends.reserve(thresholds.size() + 1);
    for (double t : thresholds)
        ends.push_back(static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()));
    ends.push_back(sorted.size());
    return ends;
}

double cell_mean(std::span<const double> sorted, std::size_t begin, std::size_t end)
{
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i)
        s += sorted[i];
    return s / static_cast<double>(end - begin);
}

double cell_sse(std::span<const double> sorted, std::size_t begin, std::size_t end, double level)
{
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double d = sorted[i] - level;
        s += d * d;
    }
    return s;
}

double total_sse(std::span<const double> sorted, const Cells& ends,
                 const std::vector<double>& levels)
{
    double s = 0.0;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < levels.size(); ++c) {
        s += cell_sse(sorted, begin, ends[c], levels[c]);
        begin = ends[c];
    }
    return s;
}

// Drops the level of an empty cell and splits the worst cell at its centroid.
bool repair_empty_cell(std::span<const double> sorted, const Cells& ends,
                       std::vector<double>& levels)
{
    std::size_t empty = levels.size();
    std::size_t worst = levels.size();
    double worst_sse = -1.0;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < levels.size(); ++c) {
        const std::size_t end = ends[c];
        if (end == begin) {
            if (empty == levels.size())
                empty = c;
        } else if (sorted[begin] < sorted[end - 1]) {
            const double sse = cell_sse(sorted, begin, end, levels[c]);
            if (sse > worst_sse) {
                worst_sse = sse;
                worst = c;
            }
        }
        begin = end;
    }
    if (empty == levels.size() || worst == levels.size())
        return false;

    const std::size_t wb = worst == 0 ? 0 : ends[worst - 1];
    const std::size_t we = ends[worst];
    const double centroid = cell_mean(sorted, wb, we);
    const auto split = static_cast<std::size_t>(
        std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(wb),
                         sorted.begin() + static_cast<std::ptrdiff_t>(we), centroid) -
        sorted.begin());
    levels[worst] = cell_mean(sorted, wb, split);
    levels[empty] = cell_mean(sorted, split, we);
    std::sort(levels.begin(), levels.end());
    return true;
}

}  // namespace

ScalarCodebook lloyd_max_train(std::span<const double> samples, int num_levels,
                               LloydMaxOptions options)
{
    using Kind = QuantizerError::Kind;
    if (num_levels < 1)
        throw QuantizerError(Kind::DegenerateInput, "num_levels must be at least 1");
    if (!(options.tol > 0.0) || options.max_iter < 1)
        throw DomainError("tol must be positive and max_iter at least 1");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct_count = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] != sorted[i - 1])
            ++distinct_count;
    const auto L = static_cast<std::size_t>(num_levels);
    if (distinct_count < L)
        throw QuantizerError(Kind::DegenerateInput,
                             "training set has fewer distinct values than levels");

    const double N = static_cast<double>(sorted.size());
    std::vector<double> levels(L);
    for (std::size_t i = 0; i < L; ++i) {
        const auto at = static_cast<std::size_t>((static_cast<double>(i) + 0.5) / L * N);
        levels[i] = sorted[std::min(at, sorted.size() - 1)];
    }

    ScalarCodebook cb;
    cb.sample_count = static_cast<std::int64_t>(sorted.size());
    Cells ends;
    auto partition_with_repair = [&] {
        for (std::size_t attempt = 0;; ++attempt) {
            ends = partition(sorted, midpoints(levels));
            bool has_empty = false;
            for (std::size_t c = 0, begin = 0; c < L; begin = ends[c], ++c)
                has_empty = has_empty || ends[c] == begin;
            if (!has_empty)
                return;
            if (attempt > 4 * L || !repair_empty_cell(sorted, ends, levels))
                throw QuantizerError(Kind::EmptyCell, "could not repopulate an empty quantizer cell");
        }
    };

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        partition_with_repair();
        std::size_t begin = 0;
        for (std::size_t c = 0; c < L; ++c) {
            levels[c] = cell_mean(sorted, begin, ends[c]);
            begin = ends[c];
        }
        const double d = total_sse(sorted, ends, levels) / N;
        cb.iterations = iter;
        const bool converged = !cb.distortion_history.empty() &&
                               (cb.distortion_history.back() - d <= options.tol * cb.distortion_history.back());
        cb.distortion_history.push_back(d);
        if (converged || d == 0.0)
            break;
    }

    partition_with_repair();
    cb.levels = levels;
    cb.thresholds = midpoints(levels);
    cb.training_distortion = total_sse(sorted, ends, levels) / N;
    cb.distortion_history.push_back(cb.training_distortion);
    return cb;
}

Quantized quantize(const ScalarCodebook& codebook, double x)
{
    const auto& t = codebook.thresholds;
    const auto index = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), x) - t.begin());
    return {index, codebook.levels[index]};
}

std::string to_json(const ScalarCodebook& codebook)
{
    nlohmann::json j = {
        {"levels", codebook.levels},
        {"thresholds", codebook.thresholds},
        {"training_distortion", codebook.training_distortion},
        {"iterations", codebook.iterations},
        {"sample_count", codebook.sample_count},
    };
    return j.dump(2);
}

ScalarCodebook codebook_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("codebook JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("codebook JSON must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "levels" && key != "thresholds" && key != "training_distortion" &&
            key != "iterations" && key != "sample_count")
            throw ValidationError("codebook JSON: unknown key '" + key + "'");

    ScalarCodebook cb;
    try {
        cb.levels = j.at("levels").get<std::vector<double>>();
        cb.thresholds = j.at("thresholds").get<std::vector<double>>();
        cb.training_distortion = j.value("training_distortion", 0.0);
        cb.iterations = j.value("iterations", 0);
        cb.sample_count = j.value("sample_count", std::int64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("codebook JSON: ") + e.what());
    }
    if (cb.levels.empty() || cb.thresholds.size() + 1 != cb.levels.size() ||
        !std::is_sorted(cb.levels.begin(), cb.levels.end()) ||
        !std::is_sorted(cb.thresholds.begin(), cb.thresholds.end()))
        throw ValidationError("codebook JSON: levels/thresholds are inconsistent");
    return cb;
}

QuantizerGap hybrid_quantizer_gap(const SystemConfig& config, const ChannelPoint& point,
                                  int num_levels, const MonteCarloSettings& settings,
                                  unsigned threads)
{
    const auto& c = validate(config);
    check_settings(settings);
    if (!point.in_design_region())
        throw OutOfDesignRegion("quantizer gap is measured at or above the design SNR only");

    const auto params = hybrid_alpha(c);
    const auto ideal = run_hybrid_idealized(c, params, point, settings, threads);

    const std::int64_t train_n = std::min<std::int64_t>(settings.total_samples(), 1 << 20);
    const auto training =
        gaussian_block(settings.seed, 0, StreamRole::Training, c.source_var, std::max<std::int64_t>(train_n, 2));
    auto codebook = lloyd_max_train(training, num_levels);

    const double analog_power = (1.0 - params.alpha) * c.power;
    const double dq = codebook.training_distortion;
    const double k = dq > 0.0 ? std::sqrt(analog_power / dq) : 0.0;
    const double gain = k * dq / (k * k * dq + point.noise_var_actual());
    const std::int64_t n = settings.block_length;

    struct Sums {
        double e2 = 0, e4 = 0;
    };
    std::vector<Sums> partials(static_cast<std::size_t>(settings.trials));
    detail::for_each_trial(settings.trials, threads, [&](std::int64_t t) {
        const auto v = gaussian_block(settings.seed, t, StreamRole::Source, c.source_var, n);
        const auto vsec = gaussian_block(settings.seed, t, StreamRole::Digital, params.alpha * c.power, n);
        const auto w = gaussian_block(settings.seed, t, StreamRole::MainNoise, point.noise_var_actual(), n);
        Sums s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double vq = quantize(codebook, v[i]).reconstruction;
            const double x = vsec[i] + k * (v[i] - vq);
            const double analog = (x + w[i]) - vsec[i];
            const double e = v[i] - (vq + gain * analog);
            s.e2 += e * e;
            s.e4 += e * e * e * e;
        }
        partials[static_cast<std::size_t>(t)] = s;
    });
    Sums total;
    for (const auto& s : partials) {
        total.e2 += s.e2;
        total.e4 += s.e4;
    }
    const double N = static_cast<double>(settings.total_samples());
    const double mean = total.e2 / N;
    const double var = std::max(0.0, (total.e4 - N * mean * mean) / std::max(N - 1.0, 1.0));

    QuantizerGap gap;
    gap.ideal_distortion = ideal.distortion.mean;
    gap.realized_distortion = mean;
    gap.gap_ratio = mean / gap.ideal_distortion;
    const double rm_residual = c.source_var / (static_cast<double>(num_levels) * num_levels);
    gap.rate_matched_ideal_distortion = rm_residual / (1.0 + analog_power / point.noise_var_actual());
    gap.rate_matched_ratio = mean / gap.rate_matched_ideal_distortion;
    gap.realized = {mean, std::sqrt(var / N), settings.total_samples()};
    gap.codebook = std::move(codebook);
    return gap;
}

}  // namespace wiretap
