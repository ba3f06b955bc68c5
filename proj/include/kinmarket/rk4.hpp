#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace kinmarket {

template <std::size_t Dim>
using OdeState = std::array<double, Dim>;

template <std::size_t Dim>
using OdeTrajectory = std::vector<std::pair<double, OdeState<Dim>>>;

namespace detail {

template <std::size_t Dim>
OdeState<Dim> axpy(const OdeState<Dim>& x, double h, const OdeState<Dim>& k) {
    OdeState<Dim> out;
    for (std::size_t i = 0; i < Dim; ++i) {
        out[i] = x[i] + h * k[i];
    }
    return out;
}

template <std::size_t Dim, class Rhs>
void rk4_step(Rhs& rhs, double t, double h, OdeState<Dim>& x) {
    const auto k1 = rhs(t, x);
    const auto k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const auto k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const auto k4 = rhs(t + h, axpy(x, h, k3));
    for (std::size_t i = 0; i < Dim; ++i) {
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

} // namespace detail

/// Classical fixed-step RK4 on [t0, t_end]; `rhs(t, x)` returns dx/dt.
/// Output times are t0 + k*dt, plus t_end itself when dt does not divide the
/// interval (the last step is shortened). The initial point is included.
template <std::size_t Dim, class Rhs>
OdeTrajectory<Dim> integrate_rk4(Rhs rhs, OdeState<Dim> x, double t0, double t_end, double dt) {
    OdeTrajectory<Dim> out;
    out.emplace_back(t0, x);
    const double span = t_end - t0;
    if (span <= 0.0) {
        return out;
    }
    const double slack = 1e-9;
    const auto n_full = static_cast<std::size_t>(std::floor(span / dt + slack));
    double t = t0;
    for (std::size_t k = 1; k <= n_full; ++k) {
        const double t_next = t0 + static_cast<double>(k) * dt;
        detail::rk4_step(rhs, t, t_next - t, x);
        t = t_next;
        out.emplace_back(t, x);
    }
    const double rest = t_end - t;
    if (rest > slack * dt) {
        detail::rk4_step(rhs, t, rest, x);
        out.emplace_back(t_end, x);
    } else {
        out.back().first = t_end;
    }
    return out;
}

} // namespace kinmarket
