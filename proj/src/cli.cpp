#include "gfq/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gfq/asympt.hpp"
#include "gfq/constants.hpp"
#include "gfq/errors.hpp"
#include "gfq/harness.hpp"
#include "gfq/simulate.hpp"
#include "gfq/threading.hpp"

namespace gfq::cli {

namespace {

using nlohmann::json;

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw validation_error("empty number list: " + s);
    return out;
}

VarianceModel parse_model_flag(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    if (kind == "fbm") {
        if (colon == std::string::npos) throw validation_error("--model fbm:H[,scale]");
        const auto nums = parse_number_list(s.substr(colon + 1));
        if (nums.size() > 2) throw validation_error("--model fbm:H[,scale]");
        return VarianceModel::fbm(nums[0], nums.size() > 1 ? nums[1] : 1.0);
    }
    if (kind == "table") {
        if (colon == std::string::npos) throw validation_error("--model table:<json-file>");
        std::ifstream in(s.substr(colon + 1));
        if (!in) throw validation_error("cannot open model file: " + s.substr(colon + 1));
        json j;
        in >> j;
        return VarianceModel::from_json(j);
    }
    throw validation_error("--model must be fbm:... or table:<file>");
}

HorizonFamily parse_horizon_flag(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw validation_error("--horizon kind:params");
    const std::string kind = s.substr(0, colon);
    const std::string rest = s.substr(colon + 1);
    if (kind == "fixed") return HorizonFamily::fixed(std::stod(rest));
    if (kind == "power") {
        const auto nums = parse_number_list(rest);
        if (nums.size() != 2) throw validation_error("--horizon power:kappa,rho");
        return HorizonFamily::power(nums[0], nums[1]);
    }
    if (kind == "offset") {
        const auto nums = parse_number_list(rest);
        if (nums.size() != 2) throw validation_error("--horizon offset:delta,beta");
        return HorizonFamily::offset(nums[0], nums[1]);
    }
    if (kind == "exp") {
        std::istringstream is(rest);
        std::string c_str, t3;
        std::getline(is, c_str, ',');
        const bool t3_scale = std::getline(is, t3, ',') && t3 == "t3";
        return HorizonFamily::exp_scale(std::stod(c_str), t3_scale);
    }
    throw validation_error("--horizon kind must be fixed|power|offset|exp");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw validation_error("unknown key in " + where + ": " + key);
    }
}

struct CommonInputs {
    std::optional<VarianceModel> model;
    double c = 1.0;
    bool c_set = false;
    double x = 0.0;
    bool x_set = false;
    std::optional<HorizonFamily> family;
    json config;

    QueueSpec make_spec() const {
        if (!model) throw validation_error("a model is required (--model or config)");
        return QueueSpec(c, x, *model);
    }
    HorizonFamily require_family() const {
        if (!family) throw validation_error("a horizon is required (--horizon or config)");
        return *family;
    }
};

/// Loads config-file values, then lets explicitly set flags override them.
void merge_config(CommonInputs& in) {
    const json& cfg = in.config;
    if (cfg.is_null()) return;
    reject_unknown_keys(cfg,
                        {"model", "queue", "horizon", "u", "u_grid", "T", "mc", "constant",
                         "targets", "seed", "threads", "budget", "output", "cache", "kind"},
                        "config");
    if (cfg.contains("model") && !in.model) in.model = VarianceModel::from_json(cfg["model"]);
    if (cfg.contains("queue")) {
        reject_unknown_keys(cfg["queue"], {"c", "x"}, "queue block");
        if (!in.c_set && cfg["queue"].contains("c")) in.c = cfg["queue"]["c"].get<double>();
        if (!in.x_set && cfg["queue"].contains("x")) in.x = cfg["queue"]["x"].get<double>();
    }
    if (cfg.contains("horizon") && !in.family) {
        in.family = HorizonFamily::from_json(cfg["horizon"]);
    }
}

std::string format_output(const json& j, bool csv_requested) {
    if (!csv_requested) return j.dump(1) + "\n";
    // generic single-object/array-of-objects CSV rendering
    const json arr = j.is_array() ? j : json::array({j});
    std::ostringstream os;
    if (arr.empty()) return "";
    std::vector<std::string> keys;
    for (const auto& [k, _] : arr[0].items()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n';
    for (const auto& row : arr) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto& v = row.at(keys[i]);
            os << (i ? "," : "");
            if (v.is_string()) {
                os << v.get<std::string>();
            } else {
                os << v.dump();
            }
        }
        os << '\n';
    }
    return os.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open output file: " + path);
    f << text;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"transient Gaussian fluid-queue asymptotics toolkit"};
    app.require_subcommand(1);

    CommonInputs in;
    std::string model_str, horizon_str, config_path, output_path, cache_path;
    std::string format = "json";
    int threads = 0;
    double budget = -1.0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--model", model_str, "fbm:H[,scale] or table:<json-file>");
    app.add_option("--c", in.c, "drain rate");
    app.add_option("--x", in.x, "initial backlog");
    app.add_option("--horizon", horizon_str, "fixed:T | power:kappa,rho | offset:delta,beta | exp:C[,t3]");
    app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", output_path, "write results to file instead of stdout");
    app.add_option("--threads", threads, "worker threads (0 = auto / GFQ_THREADS)");
    app.add_option("--budget", budget, "path-point budget override");
    app.add_option("--cache", cache_path, "constants cache file");
    app.add_flag("--json", "emit JSON (default)");

    auto* cmd_classify = app.add_subcommand("classify", "classify a (model, horizon) pair");

    auto* cmd_approx = app.add_subcommand("approx", "evaluate the asymptotic formula");
    double approx_u = 0.0;
    std::string target = "point";
    cmd_approx->add_option("--u", approx_u, "threshold level");
    cmd_approx->add_option("--target", target, "point|sup|both")
        ->check(CLI::IsMember({"point", "sup", "both"}));

    auto* cmd_estimate = app.add_subcommand("estimate", "Monte Carlo overload probabilities");
    double est_T = -1.0, est_u = -1.0;
    std::string est_u_grid;
    double est_reps = 0.0;
    std::uint64_t est_grid = 0, est_seed = 0;
    cmd_estimate->add_option("--T", est_T, "horizon (overrides --horizon at this u)");
    cmd_estimate->add_option("--u", est_u, "threshold level");
    cmd_estimate->add_option("--u-grid", est_u_grid, "comma-separated ascending levels");
    cmd_estimate->add_option("--reps", est_reps, "replications");
    cmd_estimate->add_option("--grid", est_grid, "grid points");
    cmd_estimate->add_option("--seed", est_seed, "RNG seed (required)");

    auto* cmd_constants = app.add_subcommand("constants", "estimate a Pickands/Piterbarg constant");
    std::string const_kind = "pickands";
    double const_alpha = 0.0, const_pre = 1.0, const_tc = 1.0;
    double const_d = 0.0, const_a = 0.0, const_S = 0.0, const_step = 0.0;
    double const_reps = 0.0;
    std::uint64_t const_seed = 0;
    std::string query_path;
    cmd_constants->add_option("--constant", const_kind, "pickands|piterbarg|piterbarg-a|piterbarg-tilde");
    cmd_constants->add_option("--alpha", const_alpha, "standard B_alpha base (alpha in (0,1])");
    cmd_constants->add_option("--premult", const_pre, "premultiplier for a rescaled model base");
    cmd_constants->add_option("--timechange", const_tc, "time change for a rescaled model base");
    cmd_constants->add_option("--d", const_d, "drift slope");
    cmd_constants->add_option("--a", const_a, "floor value");
    cmd_constants->add_option("--S", const_S, "sup horizon");
    cmd_constants->add_option("--step", const_step, "grid step");
    cmd_constants->add_option("--reps", const_reps, "replications");
    cmd_constants->add_option("--seed", const_seed, "RNG seed (required)");
    cmd_constants->add_option("--query", query_path, "run a constant-required query JSON file");

    auto* cmd_simulate = app.add_subcommand("simulate", "dump one path as CSV (t, X, Q)");
    double sim_hurst = 0.5, sim_step = 0.01;
    std::uint64_t sim_n = 1024, sim_seed = 0;
    cmd_simulate->add_option("--hurst", sim_hurst, "Hurst index");
    cmd_simulate->add_option("--n", sim_n, "number of increments");
    cmd_simulate->add_option("--step", sim_step, "grid step");
    cmd_simulate->add_option("--seed", sim_seed, "RNG seed (required)");

    auto* cmd_study = app.add_subcommand("study", "run a study from a config file");
    std::string study_kind = "convergence";
    cmd_study->add_option("--kind", study_kind, "convergence|stationarity|lemma-limits")
        ->check(CLI::IsMember({"convergence", "stationarity", "lemma-limits"}));

    std::vector<std::string> argv_like(args.rbegin(), args.rend());
    try {
        app.parse(argv_like);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        throw validation_error(std::string("argument parsing: ") + e.what());
    }
    const bool est_seed_set = cmd_estimate->count("--seed") > 0;
    const bool const_seed_set = cmd_constants->count("--seed") > 0;
    const bool sim_seed_set = cmd_simulate->count("--seed") > 0;

    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw validation_error("cannot open config: " + config_path);
        f >> in.config;
    }
    in.c_set = app.count("--c") > 0;
    in.x_set = app.count("--x") > 0;
    if (!model_str.empty()) in.model = parse_model_flag(model_str);
    if (!horizon_str.empty()) in.family = parse_horizon_flag(horizon_str);
    merge_config(in);
    const json& cfg = in.config;

    if (threads == 0 && !cfg.is_null() && cfg.contains("threads")) {
        threads = cfg["threads"].get<int>();
    }
    if (threads > 0) set_max_threads(threads);
    if (budget < 0.0 && !cfg.is_null() && cfg.contains("budget")) {
        budget = cfg["budget"].get<double>();
    }
    if (cache_path.empty() && !cfg.is_null() && cfg.contains("cache")) {
        cache_path = cfg["cache"].get<std::string>();
    }
    if (output_path.empty() && !cfg.is_null() && cfg.contains("output") &&
        cfg["output"].contains("path")) {
        output_path = cfg["output"]["path"].get<std::string>();
    }
    if (app.count("--format") == 0 && !cfg.is_null() && cfg.contains("output") &&
        cfg["output"].contains("format")) {
        format = cfg["output"]["format"].get<std::string>();
    }
    const bool csv = format == "csv";

    ConstantsCache cache;
    bool cache_loaded = false;
    if (!cache_path.empty()) {
        std::ifstream probe(cache_path);
        if (probe.good()) {
            cache.load(cache_path);
            cache_loaded = true;
        }
    }
    ConstantsProvider provider(cache_loaded ? &cache : nullptr);

    if (*cmd_classify) {
        const auto spec = in.make_spec();
        const auto cls = classify(spec, in.require_family());
        write_output(format_output(cls.to_json(), csv), output_path, out);
        return 0;
    }

    if (*cmd_approx) {
        if (cmd_approx->count("--u") == 0) {
            if (cfg.is_null() || !cfg.contains("u")) throw validation_error("approx: --u is required");
            approx_u = cfg["u"].get<double>();
        }
        const auto spec = in.make_spec();
        const auto family = in.require_family();
        json result;
        if (target == "both") {
            result = json::array({approx_dispatch(spec, family, approx_u, Target::point, provider).to_json(),
                                  approx_dispatch(spec, family, approx_u, Target::sup, provider).to_json()});
        } else {
            const Target t = target == "point" ? Target::point : Target::sup;
            result = approx_dispatch(spec, family, approx_u, t, provider).to_json();
        }
        write_output(format_output(result, csv), output_path, out);
        return 0;
    }

    if (*cmd_estimate) {
        bool seed_ok = est_seed_set;
        if (!cfg.is_null() && cfg.contains("mc")) {
            reject_unknown_keys(cfg["mc"], {"reps", "grid_points", "seed"}, "mc block");
            if (cmd_estimate->count("--reps") == 0 && cfg["mc"].contains("reps")) {
                est_reps = cfg["mc"]["reps"].get<double>();
            }
            if (cmd_estimate->count("--grid") == 0 && cfg["mc"].contains("grid_points")) {
                est_grid = cfg["mc"]["grid_points"].get<std::uint64_t>();
            }
            if (!seed_ok && cfg["mc"].contains("seed")) {
                est_seed = cfg["mc"]["seed"].get<std::uint64_t>();
                seed_ok = true;
            }
        }
        if (!seed_ok) throw validation_error("estimate: --seed is required (no wall-clock default)");
        if (est_reps <= 0.0 || est_grid == 0) {
            throw validation_error("estimate: --reps and --grid are required");
        }
        std::vector<double> levels;
        if (!est_u_grid.empty()) {
            levels = parse_number_list(est_u_grid);
        } else if (cmd_estimate->count("--u") > 0) {
            levels = {est_u};
        } else if (!cfg.is_null() && cfg.contains("u_grid")) {
            levels = cfg["u_grid"].get<std::vector<double>>();
        } else if (!cfg.is_null() && cfg.contains("u")) {
            levels = {cfg["u"].get<double>()};
        } else {
            throw validation_error("estimate: --u or --u-grid is required");
        }
        const auto spec = in.make_spec();
        double T = est_T;
        if (T < 0.0 && !cfg.is_null() && cfg.contains("T")) T = cfg["T"].get<double>();
        if (T < 0.0) T = horizon_value(in.require_family(), spec, levels.front());
        const double b = budget > 0.0 ? budget : k_default_mc_budget;
        const auto rows = estimate_pair(spec, T, levels, static_cast<std::uint64_t>(est_reps),
                                        est_grid, est_seed, b);
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"u", r.u},
                           {"T", T},
                           {"p_hat", r.point.p_hat},
                           {"se", r.point.std_error},
                           {"ci_low", r.point.ci_low},
                           {"ci_high", r.point.ci_high},
                           {"p_hat_sup", r.sup.p_hat},
                           {"se_sup", r.sup.std_error},
                           {"ci_low_sup", r.sup.ci_low},
                           {"ci_high_sup", r.sup.ci_high},
                           {"reps", r.point.replications},
                           {"grid", r.point.grid_points},
                           {"seed", r.point.seed}});
        }
        write_output(format_output(arr, csv), output_path, out);
        return 0;
    }

    if (*cmd_constants) {
        ConstantQuery q;
        if (!query_path.empty()) {
            std::ifstream f(query_path);
            if (!f) throw validation_error("cannot open query file: " + query_path);
            json j;
            f >> j;
            q.kind = constant_kind_from_name(j.at("kind").get<std::string>());
            const auto& pj = j.at("process");
            const auto& base = pj.at("base");
            if (base.at("kind") == "std_bm") {
                q.proc = LimitProcessSpec::std_bm_alpha(base.at("alpha").get<double>());
            } else {
                q.proc = LimitProcessSpec::rescaled(VarianceModel::from_json(base),
                                                    pj.at("premultiplier").get<double>(),
                                                    pj.at("time_change").get<double>());
            }
            q.d = j.value("d", 0.0);
            q.a = j.value("a", 0.0);
            q.S = j.at("S").get<double>();
            q.grid_step = j.at("step").get<double>();
            q.reps = j.at("reps").get<std::uint64_t>();
            q.seed = j.value("seed", std::uint64_t{1});
        } else {
            if (!const_seed_set) {
                throw validation_error("constants: --seed is required (no wall-clock default)");
            }
            q.kind = constant_kind_from_name(const_kind);
            if (const_alpha > 0.0) {
                q.proc = LimitProcessSpec::std_bm_alpha(const_alpha);
            } else if (in.model) {
                q.proc = LimitProcessSpec::rescaled(*in.model, const_pre, const_tc);
            } else {
                throw validation_error("constants: give --alpha or a --model base");
            }
            q.d = const_d;
            q.a = const_a;
            q.S = const_S > 0.0 ? const_S : default_S();
            q.grid_step = const_step > 0.0 ? const_step : default_step(q.proc);
            q.reps = const_reps > 0.0 ? static_cast<std::uint64_t>(const_reps) : default_reps();
            q.seed = const_seed;
        }
        const double b = budget > 0.0 ? budget : 6e10;
        ConstantEstimate e{};
        switch (q.kind) {
            case ConstantKind::pickands:
                e = pickands(q.proc, q.S, q.grid_step, q.reps, q.seed, b);
                break;
            case ConstantKind::piterbarg:
                e = piterbarg(q.proc, q.d, q.S, q.grid_step, q.reps, q.seed, b);
                break;
            case ConstantKind::piterbarg_a:
                e = piterbarg_a(q.proc, q.d, q.a, q.S, q.grid_step, q.reps, q.seed, b);
                break;
            case ConstantKind::piterbarg_tilde:
                e = piterbarg_tilde(q.proc, q.d, q.a, q.S, q.grid_step, q.reps, q.seed, b);
                break;
        }
        if (!cache_path.empty()) {
            cache.insert(q, e);
            cache.save(cache_path);
        }
        json record = e.to_json();
        record["process"] = q.proc.to_json();
        record["kind"] = constant_kind_name(q.kind);
        record["d"] = q.d;
        record["a"] = q.a;
        write_output(format_output(record, csv), output_path, out);
        return 0;
    }

    if (*cmd_simulate) {
        if (!sim_seed_set) throw validation_error("simulate: --seed is required");
        const auto path = generate_fgn(sim_hurst, sim_n, sim_step, sim_seed);
        const auto wl = workload_path(path, in.c, in.x);
        std::ostringstream os;
        os << "t,X,Q\n";
        os.precision(17);
        for (std::size_t k = 0; k < path.values.size(); ++k) {
            os << static_cast<double>(k) * sim_step << ',' << path.values[k] << ','
               << wl.q_values[k] << '\n';
        }
        write_output(os.str(), output_path, out);
        return 0;
    }

    if (*cmd_study) {
        if (cfg.is_null()) throw validation_error("study: --config is required");
        if (app.count("--config") == 0) throw validation_error("study: --config is required");
        if (cmd_study->count("--kind") == 0 && cfg.contains("kind")) {
            study_kind = cfg["kind"].get<std::string>();
        }
        const auto spec = in.make_spec();
        const auto family = in.require_family();
        if (study_kind == "convergence") {
            if (!cfg.contains("mc")) throw validation_error("study: mc block required");
            reject_unknown_keys(cfg["mc"], {"reps", "grid_points", "seed"}, "mc block");
            if (!cfg["mc"].contains("seed")) {
                throw validation_error("study: mc.seed is required (no wall-clock default)");
            }
            StudyConfig sc{spec,
                           family,
                           cfg.at("u_grid").get<std::vector<double>>(),
                           McSettings{cfg["mc"].at("reps").get<std::uint64_t>(),
                                      cfg["mc"].at("grid_points").get<std::uint64_t>(),
                                      cfg["mc"].at("seed").get<std::uint64_t>()},
                           true,
                           true,
                           budget > 0.0 ? budget : 1e9};
            if (cfg.contains("targets")) {
                sc.target_point = false;
                sc.target_sup = false;
                for (const auto& t : cfg["targets"]) {
                    if (t == "point") {
                        sc.target_point = true;
                    } else if (t == "sup") {
                        sc.target_sup = true;
                    } else {
                        throw validation_error("study: targets entries must be point|sup");
                    }
                }
            }
            const auto rows = convergence_study(sc, provider);
            write_output(rows_to_string(rows, csv ? ExportFormat::csv : ExportFormat::json),
                         output_path, out);
            return 0;
        }
        if (study_kind == "stationarity") {
            const auto rows =
                stationarity_study(spec, family, cfg.at("u_grid").get<std::vector<double>>(), provider);
            json arr = json::array();
            for (const auto& r : rows) {
                auto put = [](double v) -> json {
                    return std::isnan(v) ? json("n/a") : json(v);
                };
                arr.push_back({{"u", r.u},
                               {"T_u", r.T_u},
                               {"log_transient_point", put(r.log_transient_point)},
                               {"log_stationary_point", put(r.log_stationary_point)},
                               {"predicted_point_factor", put(r.predicted_point_factor)},
                               {"realized_point_ratio", put(r.realized_point_ratio)},
                               {"log_transient_sup", put(r.log_transient_sup)},
                               {"log_full_interval_sup", put(r.log_full_interval_sup)},
                               {"predicted_sup_factor", put(r.predicted_sup_factor)},
                               {"realized_sup_ratio", put(r.realized_sup_ratio)}});
            }
            write_output(format_output(arr, csv), output_path, out);
            return 0;
        }
        // lemma-limits
        std::vector<double> grid{1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
        if (cfg.contains("u_grid")) grid = cfg["u_grid"].get<std::vector<double>>();
        const auto rows = lemma_limit_sweep(spec, family, grid);
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"u", r.u},
                           {"a_u", r.slope_a},
                           {"a_limit", r.slope_a_limit},
                           {"b_u", r.curvature_b},
                           {"b_limit", r.curvature_b_limit},
                           {"t_peak_over_u", r.t_peak_over_u},
                           {"t_star", r.t_star_value},
                           {"omega", r.omega_value}});
        }
        write_output(format_output(arr, csv), output_path, out);
        return 0;
    }

    err << "no subcommand\n";
    return 2;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        try {
            return run_impl(args, out, err);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {
                // --help and friends
                std::ostringstream dummy;
                return 0;
            }
            throw validation_error(e.what());
        }
    } catch (const constant_required& e) {
        err << json{{"error", "constant-required"}, {"message", e.what()}, {"query", e.query.to_json()}}
                   .dump()
            << "\n";
        return 3;
    } catch (const budget_error& e) {
        err << json{{"error", "budget"}, {"message", e.what()}}.dump() << "\n";
        return 4;
    } catch (const regime_error& e) {
        err << json{{"error", "regime"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        err << json{{"error", "numeric"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const validation_error& e) {
        err << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
}

} // namespace gfq::cli
