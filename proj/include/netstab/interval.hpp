#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "netstab/error.hpp"

namespace netstab {

// Closed interval over the extended reals. Endpoints may be infinite but the
// interval is never empty and never collapses onto a single infinity.
//
// Every arithmetic result is widened outward by one ulp per endpoint instead
// of switching the hardware rounding mode; the enclosure stays sound.
class Interval {
public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    Interval() : lo_(0.0), hi_(0.0) {}
    explicit Interval(double v) : Interval(v, v) {}
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == inf || hi == -inf) {
            throw DomainError("invalid interval [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
        }
    }

    static Interval whole() { return {-inf, inf}; }

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] bool bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }
    [[nodiscard]] bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }
    [[nodiscard]] bool is_point() const noexcept { return lo_ == hi_; }
    [[nodiscard]] double width() const noexcept { return hi_ - lo_; }

    /// sup |x| over the interval (may be +inf).
    [[nodiscard]] double mag() const noexcept { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }

    friend bool operator==(const Interval& a, const Interval& b) noexcept {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    double lo_;
    double hi_;
};

namespace interval_detail {

inline double down(double x) { return std::isfinite(x) ? std::nextafter(x, -Interval::inf) : x; }
inline double up(double x) { return std::isfinite(x) ? std::nextafter(x, Interval::inf) : x; }

// Endpoint product with the 0 * inf = 0 convention.
inline double mul0(double a, double b) {
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    return a * b;
}

inline Interval outward(double lo, double hi) { return {down(lo), up(hi)}; }

inline Interval clamp(Interval v, double lo, double hi) {
    return {std::fmax(v.lo(), lo), std::fmin(v.hi(), hi)};
}

} // namespace interval_detail

inline Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

inline Interval operator+(const Interval& a, const Interval& b) {
    if (a.is_point() && a.lo() == 0.0) {
        return b;
    }
    if (b.is_point() && b.lo() == 0.0) {
        return a;
    }
    return interval_detail::outward(a.lo() + b.lo(), a.hi() + b.hi());
}

inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

inline Interval operator*(const Interval& a, const Interval& b) {
    using interval_detail::mul0;
    // Exact special cases keep structural zeros and unit factors tight.
    if (a.is_point() && (a.lo() == 0.0 || a.lo() == 1.0 || a.lo() == -1.0)) {
        return a.lo() == 0.0 ? Interval(0.0) : (a.lo() == 1.0 ? b : -b);
    }
    if (b.is_point() && (b.lo() == 0.0 || b.lo() == 1.0 || b.lo() == -1.0)) {
        return b.lo() == 0.0 ? Interval(0.0) : (b.lo() == 1.0 ? a : -a);
    }
    const double p1 = mul0(a.lo(), b.lo());
    const double p2 = mul0(a.lo(), b.hi());
    const double p3 = mul0(a.hi(), b.lo());
    const double p4 = mul0(a.hi(), b.hi());
    return interval_detail::outward(std::fmin(std::fmin(p1, p2), std::fmin(p3, p4)),
                                    std::fmax(std::fmax(p1, p2), std::fmax(p3, p4)));
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) {
        throw EvalError("division by an interval containing zero");
    }
    if (b.is_point() && b.lo() == 1.0) {
        return a;
    }
    const Interval recip = interval_detail::outward(1.0 / b.hi(), 1.0 / b.lo());
    return a * recip;
}

inline Interval abs(const Interval& a) {
    if (a.lo() >= 0.0) {
        return a;
    }
    if (a.hi() <= 0.0) {
        return -a;
    }
    return {0.0, a.mag()};
}

inline Interval tanh(const Interval& a) {
    return interval_detail::clamp(interval_detail::outward(std::tanh(a.lo()), std::tanh(a.hi())), -1.0, 1.0);
}

inline Interval exp(const Interval& a) {
    const Interval r = interval_detail::outward(std::exp(a.lo()), std::exp(a.hi()));
    return {std::fmax(r.lo(), 0.0), r.hi()};
}

// sech is even, maximal (=1) at 0 and decreasing in |x|.
inline Interval sech(const Interval& a) {
    auto sech_of = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / std::cosh(x); };
    double lo;
    double hi;
    if (a.contains_zero()) {
        hi = 1.0;
        lo = sech_of(a.mag());
    } else {
        const double near = std::fmin(std::fabs(a.lo()), std::fabs(a.hi()));
        const double far = a.mag();
        lo = sech_of(far);
        hi = sech_of(near);
    }
    return interval_detail::clamp(interval_detail::outward(lo, hi), 0.0, 1.0);
}

namespace interval_detail {

inline constexpr double pi = 3.14159265358979323846;

// True when some x = phase + 2k*pi lies in [lo, hi]; errs toward true.
inline bool hits_phase(double lo, double hi, double phase) {
    const double k = std::ceil((lo - phase) / (2.0 * pi) - 1e-12);
    return phase + 2.0 * pi * k <= hi + 1e-12 * (1.0 + std::fabs(hi));
}

template <typename Fn>
Interval periodic_range(const Interval& a, Fn fn, double max_phase, double min_phase) {
    if (!a.bounded() || a.width() >= 2.0 * pi) {
        return {-1.0, 1.0};
    }
    double lo = std::fmin(fn(a.lo()), fn(a.hi()));
    double hi = std::fmax(fn(a.lo()), fn(a.hi()));
    if (hits_phase(a.lo(), a.hi(), max_phase)) {
        hi = 1.0;
    }
    if (hits_phase(a.lo(), a.hi(), min_phase)) {
        lo = -1.0;
    }
    return clamp(outward(lo, hi), -1.0, 1.0);
}

} // namespace interval_detail

inline Interval sin(const Interval& a) {
    using interval_detail::pi;
    return interval_detail::periodic_range(a, [](double x) { return std::sin(x); }, pi / 2.0, -pi / 2.0);
}

inline Interval cos(const Interval& a) {
    using interval_detail::pi;
    return interval_detail::periodic_range(a, [](double x) { return std::cos(x); }, 0.0, pi);
}

/// Enclosure of sign(x); an interval touching 0 maps to [-1, 1].
inline Interval sign(const Interval& a) {
    if (a.lo() > 0.0) {
        return Interval(1.0);
    }
    if (a.hi() < 0.0) {
        return Interval(-1.0);
    }
    return {-1.0, 1.0};
}

} // namespace netstab
