#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scatlen/core.hpp"

namespace scatlen {

// Delta shell: V contains strength * delta(|x| - radius).
struct Shell {
    double radius = 0.0;
    double strength = 0.0;
};

// Piecewise density forms. All densities are nonnegative.
struct ConstantForm {
    double c = 0.0; // V(r) = c
};
struct PowerForm {
    double coefficient = 0.0; // V(r) = coefficient * r^(-exponent)
    double exponent = 0.0;
};
struct ExponentialForm {
    double coefficient = 0.0; // V(r) = coefficient * exp(-rate * r)
    double rate = 0.0;
};
using SegmentForm = std::variant<ConstantForm, PowerForm, ExponentialForm>;

// One density segment on [r_lo, r_hi). r_hi may be +inf for the power and
// exponential forms.
struct Segment {
    double r_lo = 0.0;
    double r_hi = 0.0;
    SegmentForm form;

    double density(double r) const {
        if (std::holds_alternative<ConstantForm>(form))
            return std::get<ConstantForm>(form).c;
        if (std::holds_alternative<PowerForm>(form)) {
            const auto& f = std::get<PowerForm>(form);
            return f.coefficient * std::pow(r, -f.exponent);
        }
        const auto& f = std::get<ExponentialForm>(form);
        return f.coefficient * std::exp(-f.rate * r);
    }

    bool covers(double r) const { return r >= r_lo && r < r_hi; }
};

namespace detail {

inline double form_peak(const Segment& s) {
    // Magnitude scale used only to decide whether a segment is identically zero.
    if (std::holds_alternative<ConstantForm>(s.form)) return std::get<ConstantForm>(s.form).c;
    if (std::holds_alternative<PowerForm>(s.form)) return std::get<PowerForm>(s.form).coefficient;
    return std::get<ExponentialForm>(s.form).coefficient;
}

} // namespace detail

// Radial, nonnegative potential: optional hard core (V = inf for |x| <= radius),
// finitely many delta shells, and disjoint ordered density segments.
class RadialPotential {
public:
    RadialPotential() = default;

    // Checks all structural invariants; throws std::invalid_argument on violation.
    static RadialPotential validated(double hard_core_radius, std::vector<Shell> shells,
                                     std::vector<Segment> segments) {
        if (!(hard_core_radius >= 0.0) || !std::isfinite(hard_core_radius))
            throw std::invalid_argument("hard core radius must be finite and >= 0");
        double prev_shell = 0.0;
        for (const auto& sh : shells) {
            if (!(sh.strength >= 0.0)) throw std::invalid_argument("negative shell strength");
            if (!(sh.radius > hard_core_radius))
                throw std::invalid_argument("shell inside hard core");
            if (!(sh.radius > prev_shell))
                throw std::invalid_argument("shell radii must be strictly increasing");
            prev_shell = sh.radius;
        }
        std::sort(segments.begin(), segments.end(),
                  [](const Segment& a, const Segment& b) { return a.r_lo < b.r_lo; });
        double prev_hi = hard_core_radius;
        for (const auto& seg : segments) {
            if (!(seg.r_lo < seg.r_hi)) throw std::invalid_argument("segment has empty range");
            if (seg.r_lo < hard_core_radius)
                throw std::invalid_argument("segment starts inside hard core");
            if (seg.r_lo < prev_hi) throw std::invalid_argument("overlapping segments");
            if (std::isinf(seg.r_hi) && std::holds_alternative<ConstantForm>(seg.form))
                throw std::invalid_argument("constant segment cannot extend to infinity");
            std::visit(
                [](const auto& f) {
                    using F = std::decay_t<decltype(f)>;
                    if constexpr (std::is_same_v<F, ConstantForm>) {
                        if (!(f.c >= 0.0)) throw std::invalid_argument("negative density");
                    } else if constexpr (std::is_same_v<F, PowerForm>) {
                        if (!(f.coefficient >= 0.0)) throw std::invalid_argument("negative density");
                        if (!(f.exponent >= 0.0)) throw std::invalid_argument("negative exponent");
                    } else {
                        if (!(f.coefficient >= 0.0)) throw std::invalid_argument("negative density");
                        if (!(f.rate >= 0.0)) throw std::invalid_argument("negative decay rate");
                    }
                },
                seg.form);
            prev_hi = seg.r_hi;
        }
        RadialPotential v;
        v.core_ = hard_core_radius;
        v.shells_ = std::move(shells);
        v.segments_ = std::move(segments);
        return v;
    }

    double hard_core_radius() const { return core_; }
    const std::vector<Shell>& shells() const { return shells_; }
    const std::vector<Segment>& segments() const { return segments_; }

    bool has_core() const { return core_ > 0.0; }
    bool inside_core(double r) const { return core_ > 0.0 && r <= core_; }

    // Density part of V at radius r (shells and the hard core excluded).
    double density(double r) const {
        for (const auto& seg : segments_)
            if (seg.covers(r)) return seg.density(r);
        return 0.0;
    }

    bool is_zero() const {
        if (core_ > 0.0) return false;
        for (const auto& sh : shells_)
            if (sh.strength > 0.0) return false;
        for (const auto& seg : segments_)
            if (detail::form_peak(seg) > 0.0) return false;
        return true;
    }

    bool infinite_range() const {
        for (const auto& seg : segments_)
            if (std::isinf(seg.r_hi) && detail::form_peak(seg) > 0.0) return true;
        return false;
    }

    // Largest radius with structure: core, shells, finite segment ends, and the
    // start of any infinite tail. Zero for V = 0.
    double range_scale() const {
        double r = core_;
        for (const auto& sh : shells_) r = std::max(r, sh.radius);
        for (const auto& seg : segments_) {
            if (detail::form_peak(seg) <= 0.0) continue;
            r = std::max(r, std::isinf(seg.r_hi) ? seg.r_lo : seg.r_hi);
            if (std::isinf(seg.r_hi)) {
                if (const auto* e = std::get_if<ExponentialForm>(&seg.form); e && e->rate > 0.0)
                    r = std::max(r, seg.r_lo + 1.0 / e->rate);
            }
        }
        return r;
    }

    // Radii at which V changes analytic form inside (0, up_to): segment
    // boundaries and shell positions. Sorted, deduplicated.
    std::vector<double> breakpoints(double up_to) const {
        std::vector<double> b;
        auto push = [&](double r) {
            if (r > 0.0 && r < up_to) b.push_back(r);
        };
        push(core_);
        for (const auto& sh : shells_) push(sh.radius);
        for (const auto& seg : segments_) {
            push(seg.r_lo);
            if (std::isfinite(seg.r_hi)) push(seg.r_hi);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-15 * (1.0 + std::abs(x)); }),
                b.end());
        return b;
    }

private:
    double core_ = 0.0;
    std::vector<Shell> shells_;
    std::vector<Segment> segments_;
};

namespace detail {

// Exact antiderivative-based integral of f(r) * r^k over [lo, hi] for one
// segment form, k in {1, 2}. hi may be +inf. Returns +inf when divergent.
inline double segment_moment(const SegmentForm& form, double lo, double hi, int k) {
    if (hi <= lo) return 0.0;
    if (std::holds_alternative<ConstantForm>(form)) {
        double c = std::get<ConstantForm>(form).c;
        if (c == 0.0) return 0.0;
        if (std::isinf(hi)) return inf;
        return c * (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
    }
    if (std::holds_alternative<PowerForm>(form)) {
        const auto& f = std::get<PowerForm>(form);
        if (f.coefficient == 0.0) return 0.0;
        double q = k + 1 - f.exponent; // integral of r^(k-p)
        if (q == 0.0) {
            if (std::isinf(hi)) return inf;
            return f.coefficient * std::log(hi / lo);
        }
        if (std::isinf(hi)) {
            if (q > 0.0) return inf;
            return -f.coefficient * std::pow(lo, q) / q;
        }
        return f.coefficient * (std::pow(hi, q) - std::pow(lo, q)) / q;
    }
    const auto& f = std::get<ExponentialForm>(form);
    if (f.coefficient == 0.0) return 0.0;
    if (f.rate == 0.0) {
        if (std::isinf(hi)) return inf;
        return f.coefficient * (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
    }
    double mu = f.rate;
    // antiderivative of r^k e^(-mu r): -e^(-mu r) * poly(r)
    auto poly = [&](double r) {
        if (k == 1) return r / mu + 1.0 / (mu * mu);
        return r * r / mu + 2.0 * r / (mu * mu) + 2.0 / (mu * mu * mu);
    };
    double upper = std::isinf(hi) ? 0.0 : std::exp(-mu * hi) * poly(hi);
    return f.coefficient * (std::exp(-mu * lo) * poly(lo) - upper);
}

// Integral of t * ln(t)^2 dt.
inline double prim_t_log2(double t) {
    double L = std::log(t);
    return t * t * (0.5 * L * L - 0.5 * L + 0.25);
}

// Integral of t^(q-1) * ln(t)^2 dt for q != 0.
inline double prim_tq_log2(double t, double q) {
    double L = std::log(t);
    return std::pow(t, q) * (L * L / q - 2.0 * L / (q * q) + 2.0 / (q * q * q));
}

// Fixed-order Gauss-Legendre nodes/weights on [-1, 1], 16 points.
inline const std::array<double, 8>& gl16_nodes() {
    static const std::array<double, 8> x = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    return x;
}
inline const std::array<double, 8>& gl16_weights() {
    static const std::array<double, 8> w = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    return w;
}

template <class F>
double gauss16(F&& f, double a, double b) {
    const auto& xs = gl16_nodes();
    const auto& ws = gl16_weights();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i)
        acc += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
    return acc * half;
}

// Integral of C e^(-mu r) r ln(r/ref)^2 over [lo, hi]. No elementary
// antiderivative exists for this combination; panelled Gauss-Legendre on the
// exponentially decaying integrand reaches ~1e-14 relative.
inline double exp_log2_moment(const ExponentialForm& f, double lo, double hi, double ref) {
    if (f.coefficient == 0.0) return 0.0;
    if (f.rate == 0.0) {
        if (std::isinf(hi)) return inf;
        return f.coefficient * (prim_t_log2(hi / ref) - prim_t_log2(lo / ref)) * ref * ref;
    }
    double cut = std::isinf(hi) ? lo + 60.0 / f.rate : hi;
    auto g = [&](double r) {
        double L = std::log(r / ref);
        return std::exp(-f.rate * r) * r * L * L;
    };
    double acc = 0.0;
    double panel = std::max((cut - lo) / 64.0, 1e-300);
    for (double a = lo; a < cut; a += panel)
        acc += gauss16(g, a, std::min(a + panel, cut));
    return f.coefficient * acc;
}

// Integral of f(r) * r * ln(r/ref)^2 over [lo, hi]. +inf when divergent.
inline double segment_log2_moment(const SegmentForm& form, double lo, double hi, double ref) {
    if (hi <= lo) return 0.0;
    if (std::holds_alternative<ConstantForm>(form)) {
        double c = std::get<ConstantForm>(form).c;
        if (c == 0.0) return 0.0;
        if (std::isinf(hi)) return inf;
        return c * ref * ref * (prim_t_log2(hi / ref) - prim_t_log2(lo / ref));
    }
    if (std::holds_alternative<PowerForm>(form)) {
        const auto& f = std::get<PowerForm>(form);
        if (f.coefficient == 0.0) return 0.0;
        double q = 2.0 - f.exponent;
        if (q == 0.0) {
            if (std::isinf(hi)) return inf;
            auto cube = [&](double t) { double L = std::log(t); return L * L * L / 3.0; };
            return f.coefficient * (cube(hi / ref) - cube(lo / ref));
        }
        double scale = f.coefficient * std::pow(ref, q);
        if (std::isinf(hi)) {
            if (q > 0.0) return inf;
            return -scale * prim_tq_log2(lo / ref, q);
        }
        return scale * (prim_tq_log2(hi / ref, q) - prim_tq_log2(lo / ref, q));
    }
    return exp_log2_moment(std::get<ExponentialForm>(form), lo, hi, ref);
}

} // namespace detail

// Integral of V over {|x| > b}, shells included with their surface weight.
// Returns +inf when the tail diverges. b must lie at or beyond the hard core.
inline double volume_integral(const RadialPotential& v, double b, Dim d) {
    if (b < v.hard_core_radius())
        throw std::invalid_argument("volume_integral: b inside the hard core");
    if (!(b >= 0.0)) throw std::invalid_argument("volume_integral: b must be >= 0");
    const double s_unit = d == Dim::three ? 4.0 * pi : 2.0 * pi;
    const int k = dim_value(d) - 1;
    double total = 0.0;
    for (const auto& sh : v.shells())
        if (sh.radius > b) total += sphere_surface(d, sh.radius) * sh.strength;
    for (const auto& seg : v.segments()) {
        double lo = std::max(b, seg.r_lo);
        double m = detail::segment_moment(seg.form, lo, seg.r_hi, k);
        if (std::isinf(m)) return inf;
        total += s_unit * m;
    }
    return total;
}

// Integral of V(x) [ln(|x|/ref)]^2 over {|x| > b} in the plane (d = 2
// semantics). ref defaults to b in the finiteness criterion; it is exposed
// separately so the converse bound's ln(|x|/a) weight can be evaluated too.
inline double log_weighted_tail(const RadialPotential& v, double b, double ref) {
    if (b < v.hard_core_radius())
        throw std::invalid_argument("log_weighted_tail: b inside the hard core");
    if (!(ref > 0.0)) throw std::invalid_argument("log_weighted_tail: ref must be > 0");
    double total = 0.0;
    for (const auto& sh : v.shells())
        if (sh.radius > b) {
            double L = std::log(sh.radius / ref);
            total += sphere_surface(Dim::two, sh.radius) * sh.strength * L * L;
        }
    for (const auto& seg : v.segments()) {
        double lo = std::max(b, seg.r_lo);
        double m = detail::segment_log2_moment(seg.form, lo, seg.r_hi, ref);
        if (std::isinf(m)) return inf;
        total += 2.0 * pi * m;
    }
    return total;
}

enum class Finiteness { finite, infinite, undetermined };

struct FinitenessReport {
    Finiteness verdict = Finiteness::undetermined;
    std::optional<double> a_upper_3d; // min over b of b + (8 pi)^-1 * tail integral
    std::optional<double> a_upper_2d; // min over b of b * exp((4 pi)^-1 * log-weighted tail)
    std::optional<std::string> diverging_moment;
};

namespace detail {

// Minimize f over [lo, hi]: coarse sampled scan (log-spaced plus the supplied
// must-try points) followed by golden-section refinement around the best sample.
template <class F>
std::pair<double, double> scan_minimize(F&& f, double lo, double hi,
                                        const std::vector<double>& must_try) {
    const int n = 160;
    std::vector<double> bs;
    bs.reserve(n + must_try.size() + 2);
    double llo = std::log(std::max(lo, 1e-12)), lhi = std::log(hi);
    for (int i = 0; i <= n; ++i) bs.push_back(std::exp(llo + (lhi - llo) * i / n));
    for (double b : must_try)
        if (b >= lo && b <= hi) bs.push_back(b);
    bs.push_back(lo);
    bs.push_back(hi);
    std::sort(bs.begin(), bs.end());

    double best_b = bs.front(), best_f = f(bs.front());
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < bs.size(); ++i) {
        double fi = f(bs[i]);
        if (fi < best_f) {
            best_f = fi;
            best_b = bs[i];
            best_i = i;
        }
    }
    // golden-section inside the bracketing neighbours
    double a = bs[best_i > 0 ? best_i - 1 : 0];
    double b = bs[std::min(best_i + 1, bs.size() - 1)];
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 120 && (b - a) > 1e-13 * (1.0 + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b), fm = f(xm);
    if (fm < best_f) {
        best_f = fm;
        best_b = xm;
    }
    return {best_b, best_f};
}

} // namespace detail

// Decide finiteness of the scattering length from the tail moments and, when
// finite, report the trial-function upper bound on a for the given dimension.
inline FinitenessReport finiteness_check(const RadialPotential& v, Dim d) {
    FinitenessReport rep;
    const double core = v.hard_core_radius();
    // Only behavior at infinity can make the lemma's moment diverge for every
    // b, so probe beyond all finite structure.
    const double probe = std::max(v.range_scale(), 1.0);

    double moment = d == Dim::three ? volume_integral(v, probe, d)
                                    : log_weighted_tail(v, probe, probe);
    if (std::isinf(moment)) {
        rep.verdict = Finiteness::infinite;
        rep.diverging_moment = d == Dim::three
                                   ? "volume integral of V over the tail diverges"
                                   : "log-weighted tail integral of V diverges";
        return rep;
    }
    rep.verdict = Finiteness::finite;

    double b_lo = core > 0.0 ? core : 1e-6;
    double b_max = std::max(10.0 * v.range_scale(), 10.0);
    std::vector<double> candidates;
    candidates.push_back(std::max(core, b_lo));
    for (const auto& sh : v.shells()) candidates.push_back(sh.radius);
    for (const auto& seg : v.segments()) {
        candidates.push_back(seg.r_lo);
        if (std::isfinite(seg.r_hi)) candidates.push_back(seg.r_hi);
    }

    if (d == Dim::three) {
        auto f = [&](double b) { return b + volume_integral(v, b, d) / (8.0 * pi); };
        rep.a_upper_3d = detail::scan_minimize(f, b_lo, b_max, candidates).second;
    } else {
        auto f = [&](double b) { return b * std::exp(log_weighted_tail(v, b, b) / (4.0 * pi)); };
        rep.a_upper_2d = detail::scan_minimize(f, b_lo, b_max, candidates).second;
    }
    return rep;
}

} // namespace scatlen
