#include "gfq/variance_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gfq/errors.hpp"

namespace gfq {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw validation_error(std::string(name) + " must be positive and finite");
    }
}

double table_log_interp(const NumericTable& tab, double t) {
    // piecewise power law between knots: linear in (ln t, ln sigma^2)
    const auto& ks = tab.knots;
    auto it = std::lower_bound(ks.begin(), ks.end(), t,
                               [](const auto& kv, double x) { return kv.first < x; });
    if (it == ks.begin()) ++it;
    if (it == ks.end()) --it;
    const auto& [t1, v1] = *(it - 1);
    const auto& [t2, v2] = *it;
    const double w = (std::log(t) - std::log(t1)) / (std::log(t2) - std::log(t1));
    return std::exp((1.0 - w) * std::log(v1) + w * std::log(v2));
}

} // namespace

VarianceModel VarianceModel::fbm(double hurst, double scale) {
    if (!(hurst > 0.0) || !(hurst < 1.0)) {
        throw validation_error("fBm hurst must lie in (0,1)");
    }
    check_positive(scale, "fBm scale");
    return VarianceModel(FractionalBrownian{hurst, scale});
}

VarianceModel VarianceModel::table(std::vector<std::pair<double, double>> knots,
                                   double a0, double alpha0, double ainf, double alphainf,
                                   double tolerance) {
    if (knots.size() < 2) throw validation_error("table model needs at least 2 knots");
    check_positive(a0, "A0");
    check_positive(ainf, "Ainf");
    check_positive(tolerance, "tolerance");
    if (!(alpha0 > 0.0) || !(alpha0 <= 1.0)) throw validation_error("alpha0 must lie in (0,1]");
    if (!(alphainf > 0.0) || !(alphainf < 1.0)) throw validation_error("alphainf must lie in (0,1)");
    double prev_t = 0.0, prev_v = 0.0;
    for (const auto& [t, v] : knots) {
        if (!(t > prev_t)) throw validation_error("table knots must have strictly increasing t > 0");
        if (!(v > prev_v)) throw validation_error("table sigma^2 must be strictly increasing and positive");
        prev_t = t;
        prev_v = v;
    }
    const auto& [tf, vf] = knots.front();
    const auto& [tl, vl] = knots.back();
    const double r0 = vf / (a0 * std::pow(tf, 2.0 * alpha0));
    const double rinf = vl / (ainf * std::pow(tl, 2.0 * alphainf));
    if (std::abs(r0 - 1.0) > tolerance) {
        throw validation_error("first knot inconsistent with declared origin power law");
    }
    if (std::abs(rinf - 1.0) > tolerance) {
        throw validation_error("last knot inconsistent with declared tail power law");
    }
    return VarianceModel(NumericTable{std::move(knots), a0, alpha0, ainf, alphainf, tolerance});
}

double VarianceModel::sigma2(double t) const {
    if (t < 0.0) throw validation_error("sigma2: t must be nonnegative");
    if (t == 0.0) return 0.0;
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) {
        return f->scale * std::pow(t, 2.0 * f->hurst);
    }
    const auto& tab = std::get<NumericTable>(kind_);
    const auto& [tf, vf] = tab.knots.front();
    const auto& [tl, vl] = tab.knots.back();
    if (t <= tf) return vf * std::pow(t / tf, 2.0 * tab.alpha0);
    if (t >= tl) return vl * std::pow(t / tl, 2.0 * tab.alphainf);
    return table_log_interp(tab, t);
}

double VarianceModel::sigma(double t) const { return std::sqrt(sigma2(t)); }

double VarianceModel::sigma_inverse(double v) const {
    if (!(v > 0.0)) throw validation_error("sigma_inverse: v must be positive");
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) {
        return std::pow(v * v / f->scale, 1.0 / (2.0 * f->hurst));
    }
    const auto& tab = std::get<NumericTable>(kind_);
    const double v2 = v * v;
    const auto& [tf, vf] = tab.knots.front();
    const auto& [tl, vl] = tab.knots.back();
    if (v2 <= vf) return tf * std::pow(v2 / vf, 1.0 / (2.0 * tab.alpha0));
    if (v2 >= vl) return tl * std::pow(v2 / vl, 1.0 / (2.0 * tab.alphainf));
    // the interpolant is piecewise power law, so each segment inverts exactly
    auto it = std::lower_bound(tab.knots.begin(), tab.knots.end(), v2,
                               [](const auto& kv, double x) { return kv.second < x; });
    const auto& [t2, s2] = *it;
    const auto& [t1, s1] = *(it - 1);
    const double w = (std::log(v2) - std::log(s1)) / (std::log(s2) - std::log(s1));
    const double t = std::exp((1.0 - w) * std::log(t1) + w * std::log(t2));
    if (!std::isfinite(t)) throw numeric_error("sigma_inverse: non-bracketable value");
    return t;
}

double VarianceModel::increment_covariance(double s, double t) const {
    if (s < 0.0 || t < 0.0) throw validation_error("increment_covariance: arguments must be nonnegative");
    return 0.5 * (sigma2(s) + sigma2(t) - sigma2(std::abs(t - s)));
}

double VarianceModel::alpha0() const {
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) return f->hurst;
    return std::get<NumericTable>(kind_).alpha0;
}

double VarianceModel::a0() const {
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) return f->scale;
    return std::get<NumericTable>(kind_).a0;
}

double VarianceModel::alpha_inf() const {
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) return f->hurst;
    return std::get<NumericTable>(kind_).alphainf;
}

double VarianceModel::a_inf() const {
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) return f->scale;
    return std::get<NumericTable>(kind_).ainf;
}

std::string VarianceModel::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) {
        os << "fbm:" << f->hurst << ":" << f->scale;
        return os.str();
    }
    const auto& tab = std::get<NumericTable>(kind_);
    // hash the knots so distinct tables get distinct cache keys
    std::uint64_t h = UINT64_C(0xcbf29ce484222325);
    auto mix = [&h](double x) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof x);
        std::memcpy(&bits, &x, sizeof bits);
        h ^= bits;
        h *= UINT64_C(0x100000001b3);
    };
    for (const auto& [t, v] : tab.knots) {
        mix(t);
        mix(v);
    }
    os << "table:" << tab.a0 << ":" << tab.alpha0 << ":" << tab.ainf << ":" << tab.alphainf
       << ":" << std::hex << h;
    return os.str();
}

nlohmann::json VarianceModel::to_json() const {
    if (const auto* f = std::get_if<FractionalBrownian>(&kind_)) {
        return {{"kind", "fbm"}, {"hurst", f->hurst}, {"scale", f->scale}};
    }
    const auto& tab = std::get<NumericTable>(kind_);
    nlohmann::json knots = nlohmann::json::array();
    for (const auto& [t, v] : tab.knots) knots.push_back({t, v});
    return {{"kind", "table"},
            {"knots", knots},
            {"origin", {tab.a0, tab.alpha0}},
            {"tail", {tab.ainf, tab.alphainf}},
            {"tolerance", tab.tolerance}};
}

VarianceModel VarianceModel::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fbm") {
        for (const auto& [key, _] : j.items()) {
            if (key != "kind" && key != "hurst" && key != "scale") {
                throw validation_error("unknown key in fbm model block: " + key);
            }
        }
        return fbm(j.at("hurst").get<double>(), j.value("scale", 1.0));
    }
    if (kind == "table") {
        for (const auto& [key, _] : j.items()) {
            if (key != "kind" && key != "knots" && key != "origin" && key != "tail" &&
                key != "tolerance") {
                throw validation_error("unknown key in table model block: " + key);
            }
        }
        std::vector<std::pair<double, double>> knots;
        for (const auto& kv : j.at("knots")) {
            knots.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
        }
        const auto& origin = j.at("origin");
        const auto& tail = j.at("tail");
        return table(std::move(knots), origin.at(0).get<double>(), origin.at(1).get<double>(),
                     tail.at(0).get<double>(), tail.at(1).get<double>(), j.value("tolerance", 0.05));
    }
    throw validation_error("model kind must be 'fbm' or 'table'");
}

} // namespace gfq
