#include "gfq/geometry.hpp"

#include <cmath>

#include "gfq/errors.hpp"

namespace gfq {

QueueSpec::QueueSpec(double c_, double x_, VarianceModel model_)
    : c(c_), x(x_), model(std::move(model_)) {
    if (!(c > 0.0) || !std::isfinite(c)) throw validation_error("drain rate c must be positive");
    if (!(x >= 0.0) || !std::isfinite(x)) throw validation_error("initial backlog x must be nonnegative");
}

double m_boundary(const QueueSpec& spec, double u, double t) {
    if (!(u > 0.0)) throw validation_error("m(u,t): u must be positive");
    if (!(t > 0.0)) throw validation_error("m(u,t): t must be positive (sigma(0) = 0)");
    return (u + spec.c * t) / spec.model.sigma(t);
}

double t_star(const QueueSpec& spec) {
    const double a = spec.model.alpha_inf();
    return a / (spec.c * (1.0 - a));
}

namespace {

// golden-section minimization; f assumed unimodal on [lo, hi]
double golden_min(const QueueSpec& spec, double u, double lo, double hi, double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c1 = b - inv_phi * (b - a);
    double c2 = a + inv_phi * (b - a);
    double f1 = m_boundary(spec, u, c1);
    double f2 = m_boundary(spec, u, c2);
    while ((b - a) > rel_tol * b) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - inv_phi * (b - a);
            f1 = m_boundary(spec, u, c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (b - a);
            f2 = m_boundary(spec, u, c2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double t_peak(const QueueSpec& spec, double u) {
    if (!(u > 0.0)) throw validation_error("t_peak: u must be positive");
    const double ts = t_star(spec);
    if (spec.model.is_fbm()) {
        // (u + c t) t^{-H} is stationary exactly at t* u for a pure power law
        return ts * u;
    }
    const double lo = ts * u / 10.0;
    const double hi = 10.0 * ts * u;
    const double t = golden_min(spec, u, lo, hi, 1e-10);
    if (t < lo * 1.001 || t > hi * 0.999) {
        throw numeric_error("t_peak: minimizer at bracket boundary (model violates AI in range)");
    }
    return t;
}

double delta_scale(const QueueSpec& spec, double u, double s) {
    if (!(u > 0.0) || !(s > 0.0)) throw validation_error("delta: u and s must be positive");
    const double v = std::sqrt(2.0) * spec.model.sigma2(s) / (u + spec.c * s);
    return spec.model.sigma_inverse(v);
}

double omega_ratio(const QueueSpec& spec, double u, double T) {
    const double m = m_boundary(spec, u, T);
    return m * m * delta_scale(spec, u, T) / T;
}

std::pair<double, double> ab_constants(const QueueSpec& spec) {
    const double a = spec.model.alpha_inf();
    const double ts = t_star(spec);
    const double A = std::pow(ts, -a) / (1.0 - a);
    const double B = std::pow(ts, -a - 2.0) * a;
    return {A, B};
}

double local_slope_a(const QueueSpec& spec, double u, double T) {
    const double mT = m_boundary(spec, u, T);
    auto f = [&](double t) { return 1.0 - mT / m_boundary(spec, u, T * t); };
    auto slope = [&](double h) { return -(f(1.0 + h) - f(1.0 - h)) / (2.0 * h); };
    const double h = 1e-4;
    const double s1 = slope(h);
    const double s2 = slope(h / 2.0);
    return (4.0 * s2 - s1) / 3.0;
}

double local_curvature_b(const QueueSpec& spec, double u) {
    const double tu = t_peak(spec, u);
    const double t0 = tu / u;
    const double m0 = m_boundary(spec, u, tu);
    auto f = [&](double t) { return 1.0 - m0 / m_boundary(spec, u, u * t); };
    auto curv = [&](double h) { return (f(t0 + h) + f(t0 - h)) / (2.0 * h * h); };
    const double h = 1e-4 * t0;
    const double c1 = curv(h);
    const double c2 = curv(h / 2.0);
    return (4.0 * c2 - c1) / 3.0;
}

GeometryReport geometry_report(const QueueSpec& spec, double u) {
    const double tu = t_peak(spec, u);
    const auto [A, B] = ab_constants(spec);
    return GeometryReport{u,
                          t_star(spec),
                          tu,
                          m_boundary(spec, u, tu),
                          delta_scale(spec, u, tu),
                          A,
                          B};
}

} // namespace gfq
