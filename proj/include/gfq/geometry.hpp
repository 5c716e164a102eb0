#pragma once

#include <utility>

#include "gfq/normal.hpp"
#include "gfq/variance_model.hpp"

namespace gfq {

/// Fluid queue under analysis: drain rate c, initial backlog x, Gaussian
/// input with variance function `model`.
struct QueueSpec {
    double c;
    double x;
    VarianceModel model;

    QueueSpec(double c_, double x_, VarianceModel model_);
};

struct GeometryReport {
    double u;
    double t_star;
    double t_u;
    double m_at_peak;
    double delta_at_peak;
    double a_const;
    double b_const;
};

/// Standardized boundary m(u,t) = (u + c t) / sigma(t).
double m_boundary(const QueueSpec& spec, double u, double t);

/// t* = alpha_inf / (c (1 - alpha_inf)), the linear-rate limit of t_u / u.
double t_star(const QueueSpec& spec);

/// Minimizer of m(u, .). Closed form t* u for fBm; bracketed minimization on
/// [t* u / 10, 10 t* u] to relative tolerance 1e-10 otherwise.
double t_peak(const QueueSpec& spec, double u);

/// Pickands time scale Delta(u,s) = sigma_inverse(sqrt(2) sigma^2(s) / (u + c s)).
double delta_scale(const QueueSpec& spec, double u, double s);

/// Omega(u,T) = m(u,T)^2 Delta(u,T) / T.
double omega_ratio(const QueueSpec& spec, double u, double T);

/// The constants A and B of the peak expansion.
std::pair<double, double> ab_constants(const QueueSpec& spec);

/// First-order coefficient of 1 - m(u,T)/m(u,T t) at t = 1 (central
/// differences, relative step 1e-4, one Richardson pass).
double local_slope_a(const QueueSpec& spec, double u, double T);

/// Second-order coefficient of 1 - m(u,t_u)/m(u,u t) at t = t_u/u.
double local_curvature_b(const QueueSpec& spec, double u);

GeometryReport geometry_report(const QueueSpec& spec, double u);

} // namespace gfq
