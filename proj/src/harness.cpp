#include "gfq/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gfq/errors.hpp"
#include "gfq/normal.hpp"
#include "gfq/simulate.hpp"

namespace gfq {

namespace {
constexpr double k_na = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "n/a" || s.empty()) return k_na;
    double v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw validation_error("bad numeric field in CSV: " + s);
    return v;
}
} // namespace

void StudyConfig::validate() const {
    if (u_grid.empty()) throw validation_error("study: u_grid must be nonempty");
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        if (!(u_grid[i] > 0.0)) throw validation_error("study: u values must be positive");
        if (i > 0 && u_grid[i] <= u_grid[i - 1]) {
            throw validation_error("study: u_grid must be strictly ascending");
        }
    }
    if (!target_point && !target_sup) throw validation_error("study: empty target set");
    if (mc.reps < 1 || mc.grid_points < 2) throw validation_error("study: bad mc settings");
    const double work = static_cast<double>(mc.reps) * static_cast<double>(mc.grid_points) *
                        static_cast<double>(u_grid.size());
    if (work > budget) throw budget_error("study: reps * grid * |u_grid| exceeds the budget");
}

std::vector<StudyRow> convergence_study(const StudyConfig& config,
                                        const ConstantsProvider& provider) {
    config.validate();
    std::vector<StudyRow> rows;
    rows.reserve(config.u_grid.size());
    for (const double u : config.u_grid) {
        StudyRow row;
        row.u = u;
        row.T_u = horizon_value(config.family, config.spec, u);
        const auto cls = classify(config.spec, config.family);
        row.regime = scenario_name(cls.scenario);
        row.ratio_point = k_na;
        row.ratio_sup = k_na;

        const auto pair = estimate_pair(config.spec, row.T_u, {u}, config.mc.reps,
                                        config.mc.grid_points, config.mc.seed,
                                        config.budget);
        if (config.target_point) row.mc_point = pair[0].point;
        if (config.target_sup) row.mc_sup = pair[0].sup;

        if (config.target_point) {
            const auto est = approx_dispatch(config.spec, config.family, u, Target::point, provider);
            if (est.log_value) {
                row.log_asympt_point = est.log_value;
                if (row.mc_point && row.mc_point->p_hat > 0.0) {
                    row.ratio_point = row.mc_point->p_hat / std::exp(*est.log_value);
                }
            }
        }
        if (config.target_sup) {
            const auto est = approx_dispatch(config.spec, config.family, u, Target::sup, provider);
            if (est.log_value) {
                row.log_asympt_sup = est.log_value;
                if (row.mc_sup && row.mc_sup->p_hat > 0.0) {
                    row.ratio_sup = row.mc_sup->p_hat / std::exp(*est.log_value);
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<StationarityRow> stationarity_study(const QueueSpec& spec, const HorizonFamily& family,
                                                const std::vector<double>& u_grid,
                                                const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (cls.scenario != Scenario::moderate_finite_omega &&
        cls.scenario != Scenario::long_infinite_omega) {
        throw validation_error("stationarity_study: family must be moderate/long horizon");
    }
    const bool brownian = spec.model.is_fbm() && spec.model.as_fbm().hurst == 0.5 &&
                          spec.model.as_fbm().scale == 1.0;
    const auto report = stationary_ratio(spec, family);

    std::vector<StationarityRow> rows;
    rows.reserve(u_grid.size());
    for (const double u : u_grid) {
        StationarityRow row{};
        row.u = u;
        row.T_u = horizon_value(family, spec, u);
        row.predicted_point_factor =
            report.point_relation == "factor" ? report.point_factor : k_na;
        row.predicted_sup_factor = report.sup_relation == "factor" ? report.sup_factor : k_na;
        row.log_transient_point = k_na;
        row.log_stationary_point = k_na;
        row.realized_point_ratio = k_na;
        row.log_transient_sup = k_na;
        row.log_full_interval_sup = k_na;
        row.realized_sup_ratio = k_na;

        const auto point = approx_dispatch(spec, family, u, Target::point, provider);
        if (point.log_value) row.log_transient_point = *point.log_value;
        if (brownian) {
            row.log_stationary_point = exact_bm_stationary_log(u, spec.c);
            if (point.log_value) {
                row.realized_point_ratio = std::exp(*point.log_value - row.log_stationary_point);
            }
        } else if (report.point_relation == "factor") {
            throw validation_error(
                "stationarity_study: numeric stationary reference requires the Brownian model; "
                "non-Brownian inputs are reported symbolically via stationary_ratio");
        }

        const auto sup = approx_dispatch(spec, family, u, Target::sup, provider);
        if (sup.log_value) row.log_transient_sup = *sup.log_value;
        if (report.sup_relation == "factor" && !report.degenerate_prefactor) {
            const auto full = full_interval_sup_reference(spec, family, u, provider);
            row.log_full_interval_sup = *full.log_value;
            if (sup.log_value) {
                row.realized_sup_ratio = std::exp(*sup.log_value - *full.log_value);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<LemmaLimitRow> lemma_limit_sweep(const QueueSpec& spec, const HorizonFamily& family,
                                             const std::vector<double>& u_grid) {
    const auto cls = classify(spec, family);
    const double a = spec.model.alpha_inf();
    const double gamma = std::isnan(cls.gamma) || std::isinf(cls.gamma) ? 0.0 : cls.gamma;
    const double a_limit = a - spec.c * gamma / (1.0 + spec.c * gamma);
    const auto [A, B] = ab_constants(spec);

    std::vector<LemmaLimitRow> rows;
    rows.reserve(u_grid.size());
    for (const double u : u_grid) {
        LemmaLimitRow row{};
        row.u = u;
        const double T = horizon_value(family, spec, u);
        row.slope_a = local_slope_a(spec, u, T);
        row.slope_a_limit = a_limit;
        row.curvature_b = local_curvature_b(spec, u);
        row.curvature_b_limit = B / (2.0 * A);
        row.t_peak_over_u = t_peak(spec, u) / u;
        row.t_star_value = t_star(spec);
        row.omega_value = omega_ratio(spec, u, T);
        rows.push_back(row);
    }
    return rows;
}

namespace {

const char* k_csv_header =
    "u,T_u,regime,mc_point,mc_point_se,mc_sup,mc_sup_se,log_asympt_point,log_asympt_sup,"
    "ratio_point,ratio_sup";

void append_csv_row(std::ostringstream& os, const StudyRow& r) {
    os << fmt_double(r.u) << ',' << fmt_double(r.T_u) << ',' << r.regime << ','
       << fmt_double(r.mc_point ? r.mc_point->p_hat : k_na) << ','
       << fmt_double(r.mc_point ? r.mc_point->std_error : k_na) << ','
       << fmt_double(r.mc_sup ? r.mc_sup->p_hat : k_na) << ','
       << fmt_double(r.mc_sup ? r.mc_sup->std_error : k_na) << ','
       << fmt_double(r.log_asympt_point ? *r.log_asympt_point : k_na) << ','
       << fmt_double(r.log_asympt_sup ? *r.log_asympt_sup : k_na) << ','
       << fmt_double(r.ratio_point) << ',' << fmt_double(r.ratio_sup) << '\n';
}

} // namespace

nlohmann::json study_row_json(const StudyRow& r) {
    nlohmann::json j;
    j["u"] = r.u;
    j["T_u"] = r.T_u;
    j["regime"] = r.regime;
    auto put = [&](const char* key, double v) {
        if (std::isnan(v)) {
            j[key] = "n/a";
        } else {
            j[key] = v;
        }
    };
    put("mc_point", r.mc_point ? r.mc_point->p_hat : k_na);
    put("mc_point_se", r.mc_point ? r.mc_point->std_error : k_na);
    put("mc_sup", r.mc_sup ? r.mc_sup->p_hat : k_na);
    put("mc_sup_se", r.mc_sup ? r.mc_sup->std_error : k_na);
    put("log_asympt_point", r.log_asympt_point ? *r.log_asympt_point : k_na);
    put("log_asympt_sup", r.log_asympt_sup ? *r.log_asympt_sup : k_na);
    put("ratio_point", r.ratio_point);
    put("ratio_sup", r.ratio_sup);
    return j;
}

std::string rows_to_string(const std::vector<StudyRow>& rows, ExportFormat format) {
    std::ostringstream os;
    if (format == ExportFormat::csv) {
        os << k_csv_header << '\n';
        for (const auto& r : rows) append_csv_row(os, r);
        return os.str();
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(study_row_json(r));
    os << arr.dump(1) << '\n';
    return os.str();
}

void export_rows(const std::vector<StudyRow>& rows, ExportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("export: cannot open " + path);
    out << rows_to_string(rows, format);
    if (!out) throw validation_error("export: write failed for " + path);
}

std::vector<StudyRow> parse_rows_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != k_csv_header) {
        throw validation_error("parse_rows_csv: missing or unexpected header");
    }
    std::vector<StudyRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        std::istringstream ls(line);
        while (std::getline(ls, cur, ',')) fields.push_back(cur);
        if (fields.size() != 11) throw validation_error("parse_rows_csv: bad field count");
        StudyRow r;
        r.u = parse_double(fields[0]);
        r.T_u = parse_double(fields[1]);
        r.regime = fields[2];
        const double mp = parse_double(fields[3]);
        const double mpse = parse_double(fields[4]);
        if (!std::isnan(mp)) r.mc_point = MCEstimate{mp, mpse, 0, 0, 0, 0, 0};
        const double ms = parse_double(fields[5]);
        const double msse = parse_double(fields[6]);
        if (!std::isnan(ms)) r.mc_sup = MCEstimate{ms, msse, 0, 0, 0, 0, 0};
        const double lap = parse_double(fields[7]);
        if (!std::isnan(lap)) r.log_asympt_point = lap;
        const double las = parse_double(fields[8]);
        if (!std::isnan(las)) r.log_asympt_sup = las;
        r.ratio_point = parse_double(fields[9]);
        r.ratio_sup = parse_double(fields[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace gfq
