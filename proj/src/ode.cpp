#include "fixpoint/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/errors.hpp"

namespace fixpoint::num {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kShrink = 0.2;
constexpr double kGrow = 10.0;
constexpr long kMaxSteps = 2'000'000;

bool finite(const Vec& v) {
    for (int i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) return false;
    return true;
}

double scaled_rms(const Vec& e, const Vec& y0, const Vec& y1, double tol) {
    double s = 0.0;
    for (int i = 0; i < e.size(); ++i) {
        const double sc = tol + tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
        const double q = e[i] / sc;
        s += q * q;
    }
    return std::sqrt(s / e.size());
}

// Hairer-style starting step guess from the size of f and a cheap Euler probe.
double initial_step(const Rhs& f, const Vec& y0, const Vec& f0, double t, double tol) {
    const double dir = t >= 0.0 ? 1.0 : -1.0;
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < y0.size(); ++i) {
        const double sc = tol + tol * std::fabs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / y0.size());
    d1 = std::sqrt(d1 / y0.size());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::fabs(t));
    Vec y1 = y0 + (dir * h0) * f0;
    if (!finite(y1)) return dir * std::max(1e-10, 1e-3 * std::fabs(t));
    Vec f1 = f(y1);
    double d2 = 0.0;
    for (int i = 0; i < y0.size(); ++i) {
        const double sc = tol + tol * std::fabs(y0[i]);
        const double q = (f1[i] - f0[i]) / sc;
        d2 += q * q;
    }
    d2 = std::sqrt(d2 / y0.size()) / h0;
    const double dm = std::max(d1, d2);
    double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
    return dir * std::min({100.0 * h0, h1, std::fabs(t)});
}

}  // namespace

Vec integrate_flow(const Rhs& f, const Vec& y0, double t, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_flow: tolerance must be positive");
    if (!finite(y0)) throw std::invalid_argument("integrate_flow: nonfinite initial state");
    if (t == 0.0) return y0;

    const double dir = t > 0.0 ? 1.0 : -1.0;
    Vec y = y0;
    Vec k1 = f(y);
    double s = 0.0;
    double h = initial_step(f, y, k1, t, tol);

    for (long step = 0; step < kMaxSteps; ++step) {
        if (dir * (t - s) <= 0.0) return y;
        if (dir * (s + h) > dir * t) h = t - s;
        if (std::fabs(h) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(s), 1.0))
            throw ConvergenceError("integrate_flow: step size underflow (stiff or escaping trajectory)");

        const Vec k2 = f(y + (h * a21) * k1);
        const Vec k3 = f(y + (h * a31) * k1 + (h * a32) * k2);
        const Vec k4 = f(y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
        const Vec k5 = f(y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4);
        const Vec k6 =
            f(y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 + (h * a65) * k5);
        const Vec y1 = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
        if (!finite(y1)) {
            h *= 0.5;
            continue;
        }
        const Vec k7 = f(y1);  // FSAL stage
        const Vec err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                        (h * e6) * k6 + (h * e7) * k7;
        const double enorm = scaled_rms(err, y, y1, tol);
        if (!std::isfinite(enorm)) {
            h *= 0.5;
            continue;
        }
        if (enorm <= 1.0) {
            s += h;
            y = y1;
            k1 = k7;
            const double fac = enorm > 0.0 ? kSafety * std::pow(enorm, -0.2) : kGrow;
            h *= std::clamp(fac, kShrink, kGrow);
        } else {
            h *= std::clamp(kSafety * std::pow(enorm, -0.2), kShrink, 1.0);
        }
    }
    throw ConvergenceError("integrate_flow: step budget exhausted");
}

std::vector<Vec> integrate_path(const Rhs& f, const Vec& y0, const std::vector<double>& sample_times,
                                double tol) {
    std::vector<Vec> out;
    out.reserve(sample_times.size());
    Vec y = y0;
    double t_prev = 0.0;
    for (double t : sample_times) {
        y = integrate_flow(f, y, t - t_prev, tol);
        t_prev = t;
        out.push_back(y);
    }
    return out;
}

}  // namespace fixpoint::num
