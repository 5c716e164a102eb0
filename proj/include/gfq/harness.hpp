#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gfq/asympt.hpp"
#include "gfq/estimate.hpp"

namespace gfq {

struct McSettings {
    std::uint64_t reps;
    std::uint64_t grid_points;
    std::uint64_t seed;
};

struct StudyConfig {
    QueueSpec spec;
    HorizonFamily family;
    std::vector<double> u_grid;
    McSettings mc;
    bool target_point = true;
    bool target_sup = true;
    double budget = 1e9; // path points per study

    void validate() const;
};

/// One u-row of a validation study. Ratios are mc / exp(log asymptotic) and
/// carried as NaN when the Monte Carlo estimate is zero or the asymptotic
/// side delegates to MC.
struct StudyRow {
    double u;
    double T_u;
    std::string regime;
    std::optional<MCEstimate> mc_point;
    std::optional<MCEstimate> mc_sup;
    std::optional<double> log_asympt_point;
    std::optional<double> log_asympt_sup;
    double ratio_point;
    double ratio_sup;
};

std::vector<StudyRow> convergence_study(const StudyConfig& config,
                                        const ConstantsProvider& provider = {});

/// Transient-vs-stationary comparison rows. The stationary reference is
/// evaluated in closed form for the Brownian model and reported symbolically
/// (NaN columns) otherwise.
struct StationarityRow {
    double u;
    double T_u;
    double log_transient_point;  // empty-queue point asymptotic (or shifted per branch)
    double log_stationary_point; // ln e^{-2cu}, Brownian only
    double predicted_point_factor;
    double realized_point_ratio;
    double log_transient_sup;     // long-horizon sup asymptotic
    double log_full_interval_sup; // whole-interval reference
    double predicted_sup_factor;
    double realized_sup_ratio;
};

std::vector<StationarityRow> stationarity_study(const QueueSpec& spec, const HorizonFamily& family,
                                                const std::vector<double>& u_grid,
                                                const ConstantsProvider& provider = {});

/// Peak-expansion diagnostics against their limits across a u sweep.
struct LemmaLimitRow {
    double u;
    double slope_a;
    double slope_a_limit;
    double curvature_b;
    double curvature_b_limit;
    double t_peak_over_u;
    double t_star_value;
    double omega_value;
};

std::vector<LemmaLimitRow> lemma_limit_sweep(const QueueSpec& spec, const HorizonFamily& family,
                                             const std::vector<double>& u_grid = {1e3, 1e4, 1e5, 1e6,
                                                                                  1e7, 1e8});

enum class ExportFormat { csv, json };

/// Fixed, documented column order; CSV numbers use round-trip precision.
void export_rows(const std::vector<StudyRow>& rows, ExportFormat format, const std::string& path);
std::string rows_to_string(const std::vector<StudyRow>& rows, ExportFormat format);

/// Parses a CSV produced by export_rows (round-trip counterpart).
std::vector<StudyRow> parse_rows_csv(const std::string& text);

nlohmann::json study_row_json(const StudyRow& row);

} // namespace gfq
