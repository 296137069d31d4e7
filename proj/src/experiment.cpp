#include "wiretap/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace wiretap {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader =
    "scheme,leakage_budget_bits,snr_a_db,distortion,leakage_bound_bits,provenance,trials,"
    "block_length,seed";

[[noreturn]] void invalid(const std::string& field, const std::string& message)
{
    throw ValidationError({{ConfigViolation::NonPositiveParameter, field, message}});
}

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object())
        invalid(where, "expected an object");
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            invalid(where.empty() ? key : where + "." + key, "unknown key");
}

template <class T>
T required(const json& j, const std::string& where, const char* key)
{
    const std::string field = where.empty() ? key : where + "." + key;
    if (!j.contains(key))
        invalid(field, "missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        invalid(field, "has the wrong type");
    }
}

std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{})
        throw Error("number formatting failed");
    return std::string(buf, end);
}

double parse_number(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("CSV: bad number '" + std::string(s) + "'");
    return v;
}

template <class Int>
std::optional<Int> parse_optional_int(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("CSV: bad integer '" + std::string(s) + "'");
    return v;
}

// Distinct, reproducible seed per sweep point.
std::uint64_t point_seed(std::uint64_t root, std::size_t budget_index, Scheme scheme,
                         std::size_t snr_index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                      static_cast<std::uint32_t>(budget_index),
                      static_cast<std::uint32_t>(scheme), static_cast<std::uint32_t>(snr_index)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

auto row_key(const SweepRow& r)
{
    return std::make_tuple(r.leakage_budget_bits, static_cast<int>(r.scheme), r.snr_a_db,
                           static_cast<int>(r.provenance));
}

}  // namespace

std::vector<double> SnrGrid::points_db() const
{
    std::vector<double> pts;
    if (!(step > 0.0) || !(stop >= start))
        return pts;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pts.push_back(start + static_cast<double>(i) * step);
    return pts;
}

std::vector<double> ExperimentSpec::budgets() const
{
    if (leakage_budgets_bits.empty())
        return {system.leakage_budget_bits};
    return leakage_budgets_bits;
}

SystemConfig ExperimentSpec::system_for_budget(double budget) const
{
    SystemConfig c = system;
    c.leakage_budget_bits = budget;
    return c;
}

void validate_spec(const ExperimentSpec& spec)
{
    const auto& g = spec.snr_grid_db;
    if (!std::isfinite(g.start) || !std::isfinite(g.stop) || !(g.start <= g.stop))
        invalid("snr_grid_db", "start must not exceed stop");
    if (!(g.step > 0.0) || !std::isfinite(g.step))
        invalid("snr_grid_db.step", "must be positive");
    if (spec.schemes.empty())
        invalid("schemes", "at least one scheme is required");
    if (std::set<Scheme>(spec.schemes.begin(), spec.schemes.end()).size() != spec.schemes.size())
        invalid("schemes", "duplicate scheme");

    std::vector<ConfigIssue> issues;
    for (double budget : spec.budgets()) {
        for (auto issue : find_violations(spec.system_for_budget(budget))) {
            issue.message += " (leakage budget " + format_number(budget) + ")";
            issues.push_back(std::move(issue));
        }
    }
    if (!issues.empty())
        throw ValidationError(std::move(issues));

    if (std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::OuterBound) !=
            spec.schemes.end() &&
        snr_db_to_linear(g.start) < spec.system.snr_eve())
        invalid("snr_grid_db.start", "outer_bound needs every grid SNR at or above the eavesdropper SNR");

    if (spec.montecarlo) {
        try {
            check_settings(*spec.montecarlo);
        } catch (const Error& e) {
            invalid("montecarlo", e.what());
        }
    }
}

ExperimentSpec spec_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(j, "", {"system", "snr_grid_db", "schemes", "leakage_budgets_bits",
                                "montecarlo", "output_path"});

    ExperimentSpec spec;
    const auto sys = required<json>(j, "", "system");
    reject_unknown_keys(sys, "system", {"power", "noise_var_design", "noise_var_eve", "source_var",
                                        "leakage_budget_bits"});
    spec.system.power = required<double>(sys, "system", "power");
    spec.system.noise_var_design = required<double>(sys, "system", "noise_var_design");
    spec.system.noise_var_eve = required<double>(sys, "system", "noise_var_eve");
    spec.system.source_var = sys.contains("source_var") ? required<double>(sys, "system", "source_var") : 1.0;
    spec.system.leakage_budget_bits = required<double>(sys, "system", "leakage_budget_bits");

    const auto grid = required<json>(j, "", "snr_grid_db");
    reject_unknown_keys(grid, "snr_grid_db", {"start", "stop", "step"});
    spec.snr_grid_db = {required<double>(grid, "snr_grid_db", "start"),
                        required<double>(grid, "snr_grid_db", "stop"),
                        required<double>(grid, "snr_grid_db", "step")};

    for (const auto& name : required<std::vector<std::string>>(j, "", "schemes"))
        spec.schemes.push_back(scheme_from_string(name));

    if (j.contains("leakage_budgets_bits"))
        spec.leakage_budgets_bits = required<std::vector<double>>(j, "", "leakage_budgets_bits");

    if (j.contains("montecarlo") && !j.at("montecarlo").is_null()) {
        const auto mc = j.at("montecarlo");
        reject_unknown_keys(mc, "montecarlo", {"block_length", "trials", "seed", "sample_cap"});
        MonteCarloSettings s;
        s.block_length = required<std::int64_t>(mc, "montecarlo", "block_length");
        s.trials = required<std::int64_t>(mc, "montecarlo", "trials");
        s.seed = required<std::uint64_t>(mc, "montecarlo", "seed");
        if (mc.contains("sample_cap"))
            s.sample_cap = required<std::int64_t>(mc, "montecarlo", "sample_cap");
        spec.montecarlo = s;
    }
    if (j.contains("output_path"))
        spec.output_path = required<std::string>(j, "", "output_path");

    validate_spec(spec);
    return spec;
}

ExperimentSpec spec_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

std::string spec_to_json(const ExperimentSpec& spec)
{
    json schemes = json::array();
    for (auto s : spec.schemes)
        schemes.push_back(std::string(to_string(s)));
    json j = {
        {"system",
         {{"power", spec.system.power},
          {"noise_var_design", spec.system.noise_var_design},
          {"noise_var_eve", spec.system.noise_var_eve},
          {"source_var", spec.system.source_var},
          {"leakage_budget_bits", spec.system.leakage_budget_bits}}},
        {"snr_grid_db",
         {{"start", spec.snr_grid_db.start},
          {"stop", spec.snr_grid_db.stop},
          {"step", spec.snr_grid_db.step}}},
        {"schemes", schemes},
        {"leakage_budgets_bits", spec.leakage_budgets_bits},
        {"output_path", spec.output_path},
    };
    if (spec.montecarlo)
        j["montecarlo"] = {{"block_length", spec.montecarlo->block_length},
                           {"trials", spec.montecarlo->trials},
                           {"seed", spec.montecarlo->seed},
                           {"sample_cap", spec.montecarlo->sample_cap}};
    return j.dump(2);
}

ExperimentSpec preset(std::string_view name)
{
    ExperimentSpec spec;
    spec.system = {1.0, 0.01, 1.0, 1.0, 0.01};
    spec.snr_grid_db = {20.0, 50.0, 1.0};
    if (name == "fig2") {
        spec.schemes = {Scheme::Separation, Scheme::Uncoded, Scheme::Hybrid, Scheme::OuterBound};
        spec.leakage_budgets_bits = {0.01};
    } else if (name == "fig3") {
        spec.schemes = {Scheme::Hybrid, Scheme::OuterBound};
        spec.leakage_budgets_bits = {0.001, 0.01, 0.1, 0.5};
    } else {
        invalid("preset", "unknown preset '" + std::string(name) + "' (expected fig2 or fig3)");
    }
    return spec;
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned threads)
{
    validate_spec(spec);
    const auto grid = spec.snr_grid_db.points_db();
    auto budgets = spec.budgets();
    std::sort(budgets.begin(), budgets.end());

    std::vector<SweepRow> rows;
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        const auto config = spec.system_for_budget(budgets[b]);
        for (Scheme scheme : spec.schemes) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto point = ChannelPoint::from_snr_db(config, grid[i]);
                const auto d = analytic_distortion(config, scheme, point);
                rows.push_back({scheme, budgets[b], grid[i], d.distortion, d.leakage_bound_bits,
                                Provenance::Analytic, std::nullopt, std::nullopt, std::nullopt});

                if (!spec.montecarlo)
                    continue;
                const bool simulable = scheme == Scheme::Uncoded ||
                                       (scheme == Scheme::Hybrid && point.in_design_region());
                if (!simulable)
                    continue;
                auto settings = *spec.montecarlo;
                settings.seed = point_seed(spec.montecarlo->seed, b, scheme, i);
                const auto mc = scheme == Scheme::Uncoded
                                    ? simulate_uncoded(config, point, settings, threads).first
                                    : simulate_hybrid_idealized(config, hybrid_alpha(config),
                                                                point, settings, threads)
                                          .first;
                rows.push_back({scheme, budgets[b], grid[i], mc.distortion, mc.leakage_bound_bits,
                                Provenance::MonteCarlo, settings.trials, settings.block_length,
                                spec.montecarlo->seed});
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return row_key(a) < row_key(b); });
    return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows, CsvOptions options)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        const double d = options.distortion_db ? 10.0 * std::log10(r.distortion) : r.distortion;
        out += to_string(r.scheme);
        out += ',' + format_number(r.leakage_budget_bits);
        out += ',' + format_number(r.snr_a_db);
        out += ',' + format_number(d);
        out += ',' + format_number(r.leakage_bound_bits);
        out += ',';
        out += to_string(r.provenance);
        out += ',' + (r.trials ? std::to_string(*r.trials) : std::string());
        out += ',' + (r.block_length ? std::to_string(*r.block_length) : std::string());
        out += ',' + (r.seed ? std::to_string(*r.seed) : std::string());
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ValidationError("CSV: unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::size_t begin = 0;
        for (;;) {
            const auto comma = line.find(',', begin);
            f.push_back(line.substr(begin, comma - begin));
            if (comma == std::string::npos)
                break;
            begin = comma + 1;
        }
        if (f.size() != 9)
            throw ValidationError("CSV: expected 9 fields, got " + std::to_string(f.size()));
        Provenance prov;
        if (f[5] == "analytic")
            prov = Provenance::Analytic;
        else if (f[5] == "montecarlo")
            prov = Provenance::MonteCarlo;
        else
            throw ValidationError("CSV: bad provenance '" + f[5] + "'");
        rows.push_back({scheme_from_string(f[0]), parse_number(f[1]), parse_number(f[2]),
                        parse_number(f[3]), parse_number(f[4]), prov,
                        parse_optional_int<std::int64_t>(f[6]),
                        parse_optional_int<std::int64_t>(f[7]),
                        parse_optional_int<std::uint64_t>(f[8])});
    }
    return rows;
}

void write_file_atomic(const std::string& path, const std::string& contents)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp + "' for writing");
        out << contents;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw IoError("failed writing '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

std::vector<ExponentRow> report_exponents(const ExperimentSpec& spec)
{
    validate_spec(spec);
    const auto grid = spec.snr_grid_db.points_db();
    if (grid.size() < 2 || grid.back() - grid.front() < 10.0 - 1e-9)
        throw DomainError("exponent report needs a grid covering at least one decade of SNR");
    const double top = grid.back();
    std::vector<double> window;
    for (double db : grid)
        if (db >= top - 10.0 - 1e-9)
            window.push_back(db);
    if (window.size() < 2)
        throw DomainError("top decade of the grid holds fewer than two points");

    auto budgets = spec.budgets();
    std::sort(budgets.begin(), budgets.end());
    std::vector<ExponentRow> out;
    for (double budget : budgets) {
        const auto config = spec.system_for_budget(budget);
        for (Scheme scheme : spec.schemes) {
            std::vector<SnrDistortion> pts;
            for (double db : window) {
                const auto point = ChannelPoint::from_snr_db(config, db);
                pts.push_back({point.snr_a(), analytic_distortion(config, scheme, point).distortion});
            }
            out.push_back({scheme, budget, distortion_exponent(pts), window.front(), window.back()});
        }
    }
    return out;
}

}  // namespace wiretap
