#include "cli_app.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "anisospec/asymptotics.hpp"
#include "anisospec/bounds.hpp"
#include "anisospec/errors.hpp"
#include "anisospec/scaling_tc.hpp"
#include "anisospec/spectra.hpp"
#include "anisospec/uncertainty.hpp"
#include "anisospec/version.hpp"

namespace aniso::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Dispatch [0, n) over a small thread pool; entries land in caller-owned
// slots, so parallel output is field-identical to serial.
void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, n);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<double> resolve_a_values(const std::vector<double>& list,
                                     const std::vector<double>& log_triple) {
    if (!list.empty() && !log_triple.empty())
        throw ParameterError("give either --a or --a-log, not both");
    if (!list.empty()) return list;
    if (log_triple.empty()) throw ParameterError("an a-grid is required (--a or --a-log)");
    const double lo = log_triple[0], hi = log_triple[1];
    const int count = static_cast<int>(std::lround(log_triple[2]));
    if (!(lo > 0.0) || !(lo < hi) || count < 2)
        throw ParameterError("--a-log needs 0 < min < max and count >= 2");
    std::vector<double> values(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        values[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return values;
}

ParitySector parse_sector(const std::string& name) {
    if (name == "full") return ParitySector::Full;
    if (name == "even") return ParitySector::Even;
    if (name == "odd") return ParitySector::Odd;
    throw ParameterError("sector must be one of full/even/odd");
}

// ---------------------------------------------------------------------------
// Subcommand runners: canonical config in, result object out. Every result
// embeds the config and version so emitted files are a full audit trail.

Json result_shell(const Json& cfg) {
    Json result;
    result["schema"] = "anisospec-result/1";
    result["version"] = kVersion;
    result["subcommand"] = cfg.at("subcommand");
    result["config"] = cfg;
    return result;
}

Json run_spectrum(const Json& cfg) {
    const KernelParams p{cfg.at("a"), cfg.at("T"), cfg.at("t")};
    const ParitySector sector = parse_sector(cfg.at("sector"));
    const int k = cfg.at("k");
    const double tol = cfg.at("tol");
    RefineOptions options;
    options.track_k = k;
    auto [op, report] = refine_until(p, sector, tol, options);
    const SpectrumResult spectrum = top_eigenvalues(op, k, 1e-11);

    Json result = result_shell(cfg);
    result["eigenvalues"] = spectrum.eigenvalues;
    result["deficiencies"] = spectrum.deficiencies;
    result["residuals"] = spectrum.residuals;
    result["grid"] = spectrum.grid_meta;
    result["grid_uncertainty"] = report.final_delta;
    result["invariant_ok"] = true;
    return result;
}

Json run_bounds(const Json& cfg, int jobs) {
    const std::vector<double> a_values = cfg.at("a_values");
    const double tol = cfg.at("tol");

    std::vector<Json> rows(a_values.size());
    std::vector<std::string> errors(a_values.size());
    parallel_for(static_cast<int>(a_values.size()), jobs, [&](int i) {
        try {
            const BoundReport r = certify(a_values[static_cast<std::size_t>(i)], tol);
            Json row;
            row["a"] = r.a;
            row["lower_odd"] = r.lower_odd;
            row["upper_odd"] = r.upper_odd;
            row["upper_full"] = r.upper_full;
            row["upper_full_sqrt_form"] = r.upper_full_sqrt_form;
            row["up_proof_window"] = r.up_proof_window;
            row["numeric_E_even"] = r.numeric_E_even;
            row["numeric_E_odd"] = r.numeric_E_odd;
            row["unc_even"] = r.unc_even;
            row["unc_odd"] = r.unc_odd;
            row["sandwich_ok"] = r.sandwich_ok;
            rows[static_cast<std::size_t>(i)] = std::move(row);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    });

    Json result = result_shell(cfg);
    bool all_ok = true;
    bool computed_all = true;
    Json out_rows = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!errors[i].empty()) {
            Json row;
            row["a"] = a_values[i];
            row["error"] = errors[i];
            out_rows.push_back(std::move(row));
            computed_all = false;
            continue;
        }
        all_ok = all_ok && rows[i].at("sandwich_ok").get<bool>();
        out_rows.push_back(std::move(rows[i]));
    }
    result["reports"] = std::move(out_rows);
    result["invariant_ok"] = all_ok;
    result["computed_all"] = computed_all;
    return result;
}

Json run_tc(const Json& cfg, int jobs) {
    const std::vector<double> a_values = cfg.at("a_values");
    const double tol = cfg.at("tol");

    std::vector<TcCurveEntry> entries(a_values.size());
    parallel_for(static_cast<int>(a_values.size()), jobs, [&](int i) {
        TcCurveEntry entry;
        entry.a = a_values[static_cast<std::size_t>(i)];
        try {
            entry.point = solve_tau(entry.a, tol);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries[static_cast<std::size_t>(i)] = std::move(entry);
    });

    Json result = result_shell(cfg);
    Json rows = Json::array();
    bool all_in_caps = true;
    bool computed_all = true;
    std::vector<std::pair<double, double>> fit_points;
    for (const TcCurveEntry& entry : entries) {
        Json row;
        row["a"] = entry.a;
        const double lower_cap = (1.0 / 12.0) * std::pow(0.5 * entry.a, 0.4);
        const double upper_cap = 3.0 * std::pow(entry.a, 0.4);
        if (entry.point) {
            row["tau"] = entry.point->tau;
            row["residual"] = entry.point->residual;
            row["iterations"] = entry.point->iterations;
            row["lower_cap"] = lower_cap;
            row["upper_cap"] = upper_cap;
            const bool in_caps =
                entry.point->tau >= lower_cap && entry.point->tau <= upper_cap;
            row["in_caps"] = in_caps;
            all_in_caps = all_in_caps && in_caps;
            fit_points.emplace_back(entry.a, entry.point->tau);
        } else {
            row["error"] = entry.error;
            computed_all = false;
        }
        rows.push_back(std::move(row));
    }
    result["points"] = std::move(rows);
    if (fit_points.size() >= 3) {
        const ExponentFit fit = fit_exponent(fit_points);
        result["fit"] = {{"prefactor", fit.prefactor},
                         {"exponent", fit.exponent},
                         {"rms_residual", fit.rms_residual}};
    }
    result["invariant_ok"] = all_in_caps;
    result["computed_all"] = computed_all;
    return result;
}

Json run_sweep(const Json& cfg, int jobs) {
    const std::vector<double> a_values = cfg.at("a_values");
    const double t = cfg.at("t");
    const ParitySector sector = parse_sector(cfg.at("sector"));
    const int j = cfg.at("j");
    const double tol = cfg.at("tol");

    std::vector<double> deficiencies(a_values.size());
    std::vector<std::string> errors(a_values.size());
    parallel_for(static_cast<int>(a_values.size()), jobs, [&](int i) {
        try {
            const auto pts = deficiency_sweep(
                t, {a_values[static_cast<std::size_t>(i)]}, sector, j, tol);
            deficiencies[static_cast<std::size_t>(i)] = pts[0].second;
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    });

    Json result = result_shell(cfg);
    Json rows = Json::array();
    std::vector<std::pair<double, double>> fit_points;
    bool computed_all = true;
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        Json row;
        row["a"] = a_values[i];
        if (errors[i].empty()) {
            row["deficiency"] = deficiencies[i];
            fit_points.emplace_back(a_values[i], deficiencies[i]);
        } else {
            row["error"] = errors[i];
            computed_all = false;
        }
        rows.push_back(std::move(row));
    }
    result["points"] = std::move(rows);
    result["reference_exponent"] = 2.0 / (1.0 + 2.0 * t);
    if (fit_points.size() >= 3) {
        const ExponentFit fit = fit_exponent(fit_points);
        result["fit"] = {{"prefactor", fit.prefactor},
                         {"exponent", fit.exponent},
                         {"rms_residual", fit.rms_residual}};
    }
    result["invariant_ok"] = true;
    result["computed_all"] = computed_all;
    return result;
}

Json run_widom(const Json& cfg) {
    std::vector<double> a_values = cfg.at("a_values");
    const int j_max = cfg.at("j_max");
    const double tol = cfg.at("tol");
    const int n = cfg.at("n");
    const double half_width = cfg.at("half_width");

    Json result = result_shell(cfg);
    if (a_values.empty()) {
        result["mu"] = Json::array();
        result["table"] = Json::array();
        result["invariant_ok"] = true;
        return result;
    }
    std::sort(a_values.begin(), a_values.end(), std::greater<>());
    WidomComparison cmp = widom_compare(j_max, a_values, tol);
    // Re-derive mu at the configured resolution for the report.
    cmp.mu = widom_eigenvalues(j_max, n, half_width);

    result["mu"] = cmp.mu;
    Json table = Json::array();
    for (int j = 0; j <= j_max; ++j) {
        for (std::size_t i = 0; i < cmp.a_values.size(); ++i) {
            Json row;
            row["j"] = j;
            row["a"] = cmp.a_values[i];
            row["rescaled_even"] = cmp.rescaled_even[static_cast<std::size_t>(j)][i];
            row["rescaled_odd"] = cmp.rescaled_odd[static_cast<std::size_t>(j)][i];
            row["rescaled_merged"] = cmp.rescaled_merged[static_cast<std::size_t>(j)][i];
            row["mu"] = cmp.mu[static_cast<std::size_t>(j)];
            table.push_back(std::move(row));
        }
    }
    result["table"] = std::move(table);
    result["richardson_merged"] = cmp.richardson_merged;
    result["relative_gap_merged"] = cmp.relative_gap_merged;
    result["invariant_ok"] = true;  // the comparison is exploratory by design
    return result;
}

Json run_uncertainty(const Json& cfg) {
    const int trials = cfg.at("trials");
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int max_dim = cfg.at("max_dim");
    const int sinc_n = cfg.at("sinc_n");
    const int angle_trials = cfg.at("angle_trials");
    const int dichotomy_trials = cfg.at("dichotomy_trials");

    // Additive uncertainty principle over random projector/unitary triples.
    int slack_violations = 0;
    double min_slack = 1e300;
    std::string first_violation;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(trial)));
        const int dim = 2 + trial % (max_dim - 1);
        const bool complex_field = trial % 2 == 1;
        ProjectorPair pair;
        pair.P = random_projector(rng, dim, rng.uniform_int(1, dim - 1), complex_field);
        pair.R = random_projector(rng, dim, rng.uniform_int(1, dim - 1), complex_field);
        pair.V = random_unitary(rng, dim, complex_field);
        const Eigen::VectorXcd f = random_unit_vector(rng, dim, complex_field);
        try {
            const UPWitness w = additive_up_check(pair, f);
            min_slack = std::min(min_slack, w.slack);
        } catch (const InvariantViolation& e) {
            ++slack_violations;
            if (first_violation.empty()) first_violation = e.what();
        }
    }

    // Three-vector angle inequality.
    int angle_violations = 0;
    for (int trial = 0; trial < angle_trials; ++trial) {
        Rng rng(Rng::derive(seed ^ 0x616e676cULL, static_cast<std::uint64_t>(trial)));
        const auto u = random_unit_vector(rng, 3, true);
        const auto v = random_unit_vector(rng, 3, true);
        const auto g = random_unit_vector(rng, 3, true);
        try {
            pair_angle_bound(u, v, g);
        } catch (const InvariantViolation&) {
            ++angle_violations;
        }
    }

    // Concentration dichotomy over random smooth test functions at h = H = 1.
    const std::vector<double> breaks = {-16, -12, -8, -5, -3, -2, -1, -0.5, 0,
                                        0.5, 1,   2,  3,  5,  8,  12, 16};
    const QuadratureGrid grid = build_grid_from_breaks(breaks, 12);
    int case_space = 0, case_freq = 0, case_both = 0, dichotomy_violations = 0;
    for (int trial = 0; trial < dichotomy_trials; ++trial) {
        Rng rng(Rng::derive(seed ^ 0x64696368ULL, static_cast<std::uint64_t>(trial)));
        Tabulated f;
        f.grid = grid;
        f.values.assign(grid.node_count(), 0.0);
        for (int comp = 0; comp < 3; ++comp) {
            const double c = rng.uniform(-1.0, 1.0);
            const double mu = rng.uniform(-2.5, 2.5);
            const double sigma = rng.uniform(0.35, 2.0);
            const double omega = rng.uniform(0.0, 4.0);
            const double theta = rng.uniform(0.0, 6.283185307179586);
            for (std::size_t i = 0; i < grid.node_count(); ++i) {
                const double x = grid.nodes[i];
                f.values[i] += c * std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma)) *
                               std::cos(omega * x + theta);
            }
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < grid.node_count(); ++i)
            norm2 += grid.weights[i] * f.values[i] * f.values[i];
        if (norm2 < 1e-12) continue;  // essentially-zero draw, skip
        const double scale = 1.0 / std::sqrt(norm2);
        for (double& v : f.values) v *= scale;
        try {
            const DichotomyResult d = concentration_dichotomy(f, 1.0, 1.0);
            if (d.which == DichotomyCase::Both)
                ++case_both;
            else if (d.which == DichotomyCase::SpaceTail)
                ++case_space;
            else
                ++case_freq;
        } catch (const InvariantViolation&) {
            ++dichotomy_violations;
        }
    }

    // Sinc operator constants.
    const DiscretizedOperator op200 = sinc_operator(sinc_n);
    const double lambda200 = top_eigenvalues(op200, 1, 1e-11).eigenvalues[0];
    const DiscretizedOperator op400 = sinc_operator(2 * sinc_n);
    const double lambda400 = top_eigenvalues(op400, 1, 1e-11).eigenvalues[0];
    const double richardson = lambda400 + (lambda400 - lambda200) / 3.0;
    const double schur = sinc_schur_bound();
    const double implied_b = std::sqrt(schur);
    const double implied_gap = 0.5 * (1.0 - implied_b);

    Json result = result_shell(cfg);
    result["trials"] = trials;
    result["slack_violations"] = slack_violations;
    result["min_slack"] = min_slack;
    if (!first_violation.empty()) result["first_violation"] = first_violation;
    result["angle_trials"] = angle_trials;
    result["angle_violations"] = angle_violations;
    result["dichotomy_trials"] = dichotomy_trials;
    result["dichotomy_case_space"] = case_space;
    result["dichotomy_case_freq"] = case_freq;
    result["dichotomy_case_both"] = case_both;
    result["dichotomy_violations"] = dichotomy_violations;
    result["sinc_lambda0"] = lambda200;
    result["sinc_lambda0_fine"] = lambda400;
    result["sinc_lambda0_richardson"] = richardson;
    result["sinc_reference"] = 0.57258;
    result["sinc_fifth_digit_flag"] = std::abs(lambda200 - 0.57258) > 5e-5;
    result["sinc_schur"] = schur;
    result["implied_b"] = implied_b;
    result["implied_gap"] = implied_gap;
    result["invariant_ok"] = slack_violations == 0 && angle_violations == 0 &&
                             dichotomy_violations == 0 && schur < 0.60232 &&
                             implied_gap > 1.0 / 9.0;
    return result;
}

Json dispatch(const Json& cfg, int jobs) {
    const std::string sub = cfg.at("subcommand");
    if (sub == "spectrum") return run_spectrum(cfg);
    if (sub == "bounds") return run_bounds(cfg, jobs);
    if (sub == "tc") return run_tc(cfg, jobs);
    if (sub == "sweep") return run_sweep(cfg, jobs);
    if (sub == "widom") return run_widom(cfg);
    if (sub == "uncertainty") return run_uncertainty(cfg);
    throw ParameterError("unknown subcommand: " + sub);
}

// ---------------------------------------------------------------------------
// Emission.

void write_atomic(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << bytes;
    }
    fs::rename(tmp, path);
}

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    double reference_slope = 0.4;
    std::string x_label = "a";
    std::string y_label;
};

PlotSeries plot_series(const Json& result) {
    PlotSeries s;
    const std::string sub = result.at("subcommand");
    if (sub == "tc") {
        s.y_label = "tau";
        for (const auto& row : result.at("points"))
            if (row.contains("tau")) {
                s.x.push_back(row.at("a"));
                s.y.push_back(row.at("tau"));
            }
    } else if (sub == "sweep") {
        s.y_label = "deficiency";
        s.reference_slope = result.at("reference_exponent");
        for (const auto& row : result.at("points"))
            if (row.contains("deficiency")) {
                s.x.push_back(row.at("a"));
                s.y.push_back(row.at("deficiency"));
            }
    } else if (sub == "bounds") {
        s.y_label = "1 - E_even";
        for (const auto& row : result.at("reports"))
            if (row.contains("numeric_E_even")) {
                s.x.push_back(row.at("a"));
                s.y.push_back(1.0 - row.at("numeric_E_even").get<double>());
            }
    } else {
        throw ParameterError("no plot defined for subcommand " + sub);
    }
    return s;
}

}  // namespace

std::string render_csv(const Json& result) {
    const std::string sub = result.at("subcommand");
    std::ostringstream out;
    const auto cell = [&](const Json& row, const char* key) -> std::string {
        if (!row.contains(key)) return "";
        const Json& v = row.at(key);
        if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return fmt17(v.get<double>());
        return v.get<std::string>();
    };
    if (sub == "spectrum") {
        out << "j,eigenvalue,deficiency,residual\n";
        const auto& ev = result.at("eigenvalues");
        const auto& de = result.at("deficiencies");
        const auto& re = result.at("residuals");
        for (std::size_t j = 0; j < ev.size(); ++j)
            out << j << ',' << fmt17(ev[j]) << ',' << fmt17(de[j]) << ','
                << fmt17(re[j]) << '\n';
    } else if (sub == "bounds") {
        out << "a,lower_odd,upper_odd,upper_full,numeric_E_even,numeric_E_odd,"
               "unc_even,unc_odd,sandwich_ok\n";
        for (const auto& row : result.at("reports"))
            out << cell(row, "a") << ',' << cell(row, "lower_odd") << ','
                << cell(row, "upper_odd") << ',' << cell(row, "upper_full") << ','
                << cell(row, "numeric_E_even") << ',' << cell(row, "numeric_E_odd")
                << ',' << cell(row, "unc_even") << ',' << cell(row, "unc_odd") << ','
                << cell(row, "sandwich_ok") << '\n';
    } else if (sub == "tc") {
        out << "a,tau,residual,iterations,lower_cap,upper_cap\n";
        for (const auto& row : result.at("points"))
            out << cell(row, "a") << ',' << cell(row, "tau") << ','
                << cell(row, "residual") << ',' << cell(row, "iterations") << ','
                << cell(row, "lower_cap") << ',' << cell(row, "upper_cap") << '\n';
    } else if (sub == "sweep") {
        out << "a,deficiency\n";
        for (const auto& row : result.at("points"))
            out << cell(row, "a") << ',' << cell(row, "deficiency") << '\n';
    } else if (sub == "widom") {
        out << "j,a,rescaled_even,rescaled_odd,rescaled_merged,mu\n";
        for (const auto& row : result.at("table"))
            out << cell(row, "j") << ',' << cell(row, "a") << ','
                << cell(row, "rescaled_even") << ',' << cell(row, "rescaled_odd")
                << ',' << cell(row, "rescaled_merged") << ',' << cell(row, "mu")
                << '\n';
    } else if (sub == "uncertainty") {
        out << "metric,value\n";
        for (const char* key :
             {"slack_violations", "min_slack", "angle_violations",
              "dichotomy_violations", "sinc_lambda0", "sinc_lambda0_richardson",
              "sinc_schur", "implied_b", "implied_gap"})
            out << key << ',' << cell(result, key) << '\n';
    } else {
        throw ParameterError("no CSV layout for subcommand " + sub);
    }
    return out.str();
}

std::string render_svg(const Json& result) {
    const PlotSeries s = plot_series(result);
    const int width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 20, mb = 50;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    out << "<path d=\"M " << ml << ' ' << mt << " L " << ml << ' ' << (height - mb)
        << " L " << (width - mr) << ' ' << (height - mb)
        << "\" stroke=\"black\" fill=\"none\"/>\n";

    if (!s.x.empty()) {
        double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            lx_min = std::min(lx_min, std::log10(s.x[i]));
            lx_max = std::max(lx_max, std::log10(s.x[i]));
            ly_min = std::min(ly_min, std::log10(s.y[i]));
            ly_max = std::max(ly_max, std::log10(s.y[i]));
        }
        if (lx_max - lx_min < 1e-12) {
            lx_min -= 0.5;
            lx_max += 0.5;
        }
        if (ly_max - ly_min < 1e-12) {
            ly_min -= 0.5;
            ly_max += 0.5;
        }
        const double pad_x = 0.06 * (lx_max - lx_min);
        const double pad_y = 0.10 * (ly_max - ly_min);
        lx_min -= pad_x;
        lx_max += pad_x;
        ly_min -= pad_y;
        ly_max += pad_y;
        const auto px = [&](double lx) {
            return ml + (lx - lx_min) / (lx_max - lx_min) * (width - ml - mr);
        };
        const auto py = [&](double ly) {
            return height - mb - (ly - ly_min) / (ly_max - ly_min) * (height - mt - mb);
        };

        // One reference slope line through the data's log-log centroid.
        double cx = 0.0, cy = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            cx += std::log10(s.x[i]);
            cy += std::log10(s.y[i]);
        }
        cx /= static_cast<double>(s.x.size());
        cy /= static_cast<double>(s.x.size());
        const double x0 = lx_min + 0.02 * (lx_max - lx_min);
        const double x1 = lx_max - 0.02 * (lx_max - lx_min);
        const double y0 = cy + s.reference_slope * (x0 - cx);
        const double y1 = cy + s.reference_slope * (x1 - cx);
        out << "<line class=\"ref\" x1=\"" << fmt6(px(x0)) << "\" y1=\""
            << fmt6(py(y0)) << "\" x2=\"" << fmt6(px(x1)) << "\" y2=\""
            << fmt6(py(y1))
            << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";

        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "<circle class=\"pt\" cx=\"" << fmt6(px(std::log10(s.x[i])))
                << "\" cy=\"" << fmt6(py(std::log10(s.y[i])))
                << "\" r=\"3.5\" fill=\"#1f4e9c\"/>\n";
        out << "<text x=\"" << (width / 2) << "\" y=\"" << (height - 12)
            << "\" text-anchor=\"middle\" font-size=\"13\">" << s.x_label
            << " (log)</text>\n";
        out << "<text x=\"16\" y=\"" << (height / 2)
            << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
            << (height / 2) << ")\">" << s.y_label << " (log)</text>\n";
        out << "<text x=\"" << (width - mr - 4) << "\" y=\"" << (mt + 14)
            << "\" text-anchor=\"end\" font-size=\"12\">reference slope "
            << fmt6(s.reference_slope) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string cache_key(const Json& config) {
    Json keyed = config;
    keyed["code_version"] = kVersion;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(keyed.dump()));
    return buf;
}

namespace {

// ---------------------------------------------------------------------------
// Cache: one JSON file per key under the cache directory; corrupt or
// mismatched entries are ignored with a warning and recomputed.

std::string cache_dir_from(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("ANISOSPEC_CACHE_DIR");
    return env ? env : "";
}

bool cache_load(const fs::path& dir, const Json& cfg, Json& result) {
    const fs::path path = dir / (cache_key(cfg) + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    try {
        Json cached = Json::parse(in);
        if (cached.at("config") != cfg || cached.at("version") != kVersion) {
            std::fprintf(stderr, "[anisospec] cache entry %s does not match its key; recomputing\n",
                         path.string().c_str());
            return false;
        }
        result = std::move(cached);
        return true;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "[anisospec] corrupt cache entry %s ignored (%s)\n",
                     path.string().c_str(), e.what());
        return false;
    }
}

void cache_store(const fs::path& dir, const Json& cfg, const Json& result) {
    fs::create_directories(dir);
    write_atomic(dir / (cache_key(cfg) + ".json"), result.dump(2) + "\n");
}

struct CommonFlags {
    std::string format = "json";
    bool plot = false;
    std::string out;
    std::string cache_dir;
    int jobs = 1;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--format", flags.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--plot", flags.plot, "also emit a log-log SVG plot");
    sub->add_option("--out", flags.out, "output file path");
    sub->add_option("--cache-dir", flags.cache_dir,
                    "result cache directory (default $ANISOSPEC_CACHE_DIR)");
    sub->add_option("--jobs", flags.jobs, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
}

int emit_and_report(const Json& result, const CommonFlags& flags) {
    const std::string sub = result.at("subcommand");
    fs::path out_path = flags.out.empty()
                            ? fs::path(sub + "_result." +
                                       (flags.format == "csv" ? "csv" : "json"))
                            : fs::path(flags.out);
    const std::string bytes =
        flags.format == "csv" ? render_csv(result) : result.dump(2) + "\n";
    write_atomic(out_path, bytes);
    std::printf("[anisospec] wrote %s\n", out_path.string().c_str());
    if (flags.plot) {
        fs::path svg_path = out_path;
        svg_path.replace_extension(".svg");
        write_atomic(svg_path, render_svg(result));
        std::printf("[anisospec] wrote %s\n", svg_path.string().c_str());
    }
    if (!result.value("computed_all", true)) return 3;
    if (!result.at("invariant_ok").get<bool>()) return 4;
    return 0;
}

int run_with_cache(const Json& cfg, const CommonFlags& flags) {
    const std::string dir = cache_dir_from(flags.cache_dir);
    Json result;
    if (!dir.empty() && cache_load(dir, cfg, result)) {
        std::printf("[anisospec] cache hit %s\n", cache_key(cfg).c_str());
    } else {
        result = dispatch(cfg, flags.jobs);
        if (!dir.empty()) {
            cache_store(dir, cfg, result);
            std::printf("[anisospec] cache store %s\n", cache_key(cfg).c_str());
        }
    }
    return emit_and_report(result, flags);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"spectral toolkit for the anisotropic kernel family"};
    app.require_subcommand(1);
    app.set_config("--config", "", "plain key=value config file; flags override");
    app.set_version_flag("--version", kVersion);

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "top-k eigenvalues at one parameter point");
    double sp_a = 0.05, sp_T = 1.0, sp_t = 2.0, sp_tol = 1e-8;
    int sp_k = 5;
    std::string sp_sector = "even";
    CommonFlags sp_flags;
    sp->add_option("--a", sp_a, "anisotropy")->required();
    sp->add_option("--T", sp_T, "temperature");
    sp->add_option("--t", sp_t, "confinement exponent");
    sp->add_option("--sector", sp_sector, "full/even/odd");
    sp->add_option("--k", sp_k, "number of eigenvalues")->check(CLI::PositiveNumber);
    sp->add_option("--tol", sp_tol, "grid convergence tolerance")
        ->check(CLI::PositiveNumber);
    add_common(sp, sp_flags);

    // bounds
    auto* bo = app.add_subcommand("bounds", "certified bound report per anisotropy");
    std::vector<double> bo_a, bo_alog;
    double bo_tol = 1e-8;
    CommonFlags bo_flags;
    bo->add_option("--a", bo_a, "anisotropy values");
    bo->add_option("--a-log", bo_alog, "log-spaced grid: min max count")
        ->expected(3);
    bo->add_option("--tol", bo_tol, "eigenvalue tolerance")->check(CLI::PositiveNumber);
    add_common(bo, bo_flags);

    // tc
    auto* tc = app.add_subcommand("tc", "critical-temperature shift curve");
    std::vector<double> tc_a, tc_alog;
    double tc_tol = 1e-8;
    CommonFlags tc_flags;
    tc->add_option("--a", tc_a, "anisotropy values");
    tc->add_option("--a-log", tc_alog, "log-spaced grid: min max count")->expected(3);
    tc->add_option("--tol", tc_tol, "root residual tolerance")
        ->check(CLI::PositiveNumber);
    add_common(tc, tc_flags);

    // sweep
    auto* sw = app.add_subcommand("sweep", "deficiency sweep and exponent fit");
    std::vector<double> sw_a, sw_alog;
    double sw_t = 2.0, sw_tol = 1e-8;
    int sw_j = 0;
    std::string sw_sector = "even";
    CommonFlags sw_flags;
    sw->add_option("--t", sw_t, "confinement exponent")->check(CLI::PositiveNumber);
    sw->add_option("--a", sw_a, "anisotropy values");
    sw->add_option("--a-log", sw_alog, "log-spaced grid: min max count")->expected(3);
    sw->add_option("--sector", sw_sector, "full/even/odd");
    sw->add_option("--j", sw_j, "eigenvalue index within the sector")
        ->check(CLI::Range(0, 5));
    sw->add_option("--tol", sw_tol, "grid convergence tolerance")
        ->check(CLI::PositiveNumber);
    add_common(sw, sw_flags);

    // widom
    auto* wi = app.add_subcommand("widom", "rescaled deficiencies vs the |s|+4x^4 operator");
    std::vector<double> wi_a{0.04, 0.02, 0.01, 0.005};
    int wi_jmax = 3, wi_n = 512;
    double wi_half = 20.0, wi_tol = 1e-7;
    CommonFlags wi_flags;
    wi->add_option("--a", wi_a, "anisotropy values (descending)");
    wi->add_option("--j-max", wi_jmax, "deepest eigenvalue index")->check(CLI::Range(0, 5));
    wi->add_option("--n", wi_n, "operator grid size (power of two)");
    wi->add_option("--half-width", wi_half, "operator domain half width");
    wi->add_option("--tol", wi_tol, "grid convergence tolerance")
        ->check(CLI::PositiveNumber);
    add_common(wi, wi_flags);

    // uncertainty
    auto* un = app.add_subcommand("uncertainty",
                                  "randomized uncertainty-principle suite + sinc norms");
    int un_trials = 1000, un_max_dim = 50, un_sinc_n = 200;
    int un_angle_trials = -1, un_dich_trials = -1;
    std::uint64_t un_seed = 12345;
    CommonFlags un_flags;
    un->add_option("--trials", un_trials, "projector/unitary trials")
        ->check(CLI::PositiveNumber);
    un->add_option("--seed", un_seed, "master seed");
    un->add_option("--max-dim", un_max_dim, "largest matrix dimension")
        ->check(CLI::Range(2, 200));
    un->add_option("--sinc-n", un_sinc_n, "sinc grid size")->check(CLI::PositiveNumber);
    un->add_option("--angle-trials", un_angle_trials,
                   "three-vector inequality trials (default 10x trials)");
    un->add_option("--dichotomy-trials", un_dich_trials,
                   "concentration dichotomy trials (default = trials)");
    add_common(un, un_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Json cfg;
        const CommonFlags* flags = nullptr;
        if (sp->parsed()) {
            cfg["subcommand"] = "spectrum";
            cfg["a"] = sp_a;
            cfg["T"] = sp_T;
            cfg["t"] = sp_t;
            cfg["sector"] = sp_sector;
            cfg["k"] = sp_k;
            cfg["tol"] = sp_tol;
            flags = &sp_flags;
        } else if (bo->parsed()) {
            cfg["subcommand"] = "bounds";
            cfg["a_values"] = resolve_a_values(bo_a, bo_alog);
            cfg["tol"] = bo_tol;
            flags = &bo_flags;
        } else if (tc->parsed()) {
            cfg["subcommand"] = "tc";
            cfg["a_values"] = resolve_a_values(tc_a, tc_alog);
            cfg["tol"] = tc_tol;
            flags = &tc_flags;
        } else if (sw->parsed()) {
            cfg["subcommand"] = "sweep";
            cfg["t"] = sw_t;
            cfg["a_values"] = resolve_a_values(sw_a, sw_alog);
            cfg["sector"] = sw_sector;
            cfg["j"] = sw_j;
            cfg["tol"] = sw_tol;
            flags = &sw_flags;
        } else if (wi->parsed()) {
            cfg["subcommand"] = "widom";
            cfg["a_values"] = wi_a;
            cfg["j_max"] = wi_jmax;
            cfg["n"] = wi_n;
            cfg["half_width"] = wi_half;
            cfg["tol"] = wi_tol;
            flags = &wi_flags;
        } else if (un->parsed()) {
            cfg["subcommand"] = "uncertainty";
            cfg["trials"] = un_trials;
            cfg["seed"] = un_seed;
            cfg["max_dim"] = un_max_dim;
            cfg["sinc_n"] = un_sinc_n;
            cfg["angle_trials"] = un_angle_trials > 0 ? un_angle_trials : 10 * un_trials;
            cfg["dichotomy_trials"] = un_dich_trials > 0 ? un_dich_trials : un_trials;
            flags = &un_flags;
        }
        return run_with_cache(cfg, *flags);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "[anisospec] config error: %s\n", e.what());
        return 2;
    } catch (const InvariantViolation& e) {
        std::fprintf(stderr, "[anisospec] invariant violation: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "[anisospec] computation failed: %s\n", e.what());
        return 3;
    }
}

}  // namespace aniso::cli
