#pragma once

// Sampled functions on a point space, distribution functions, decreasing
// rearrangements, Lebesgue and Lorentz norms. Everything is evaluated in
// closed form from the step structure except the averaged-rearrangement
// Lorentz integral with finite second index, which uses per-interval
// Gauss-Legendre on an analytic integrand (no acceptance tolerance
// depends on it).

#include <complex>

#include "fmn/space.hpp"

namespace fmn {

class SampledFunction {
public:
    SampledFunction(const PointSpace& space, std::vector<std::complex<double>> values,
                    std::string id = "f")
        : space_(&space), values_(std::move(values)), id_(std::move(id)) {
        require(values_.size() == space.size(), "function/space size mismatch");
        for (auto& v : values_)
            require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                    "function values must be finite");
        max_abs_ = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            double a = std::abs(values_[i]);
            if (a > 0) support_.push_back(static_cast<PointId>(i));
            max_abs_ = std::max(max_abs_, a);
        }
    }

    static SampledFunction real(const PointSpace& space, const std::vector<double>& values,
                                std::string id = "f") {
        std::vector<std::complex<double>> v(values.begin(), values.end());
        return SampledFunction(space, std::move(v), std::move(id));
    }

    static SampledFunction zero(const PointSpace& space, std::string id = "zero") {
        return SampledFunction(space, std::vector<std::complex<double>>(space.size(), 0.0),
                               std::move(id));
    }

    static SampledFunction indicator(const PointSpace& space, const std::vector<PointId>& set,
                                     std::string id = "indicator") {
        std::vector<std::complex<double>> v(space.size(), 0.0);
        for (PointId i : set) v[i] = 1.0;
        return SampledFunction(space, std::move(v), std::move(id));
    }

    const PointSpace& space() const { return *space_; }
    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }
    std::size_t size() const { return values_.size(); }
    std::complex<double> value(PointId i) const { return values_[i]; }
    double abs(PointId i) const { return std::abs(values_[i]); }
    double max_abs() const { return max_abs_; }
    const std::vector<PointId>& support() const { return support_; }
    bool is_zero() const { return support_.empty(); }

    SampledFunction scaled(std::complex<double> c, std::string id = "") const {
        std::vector<std::complex<double>> v(values_);
        for (auto& x : v) x *= c;
        return SampledFunction(*space_, std::move(v), id.empty() ? id_ + "*c" : std::move(id));
    }

    SampledFunction plus(const SampledFunction& other, std::string id = "") const {
        require(space_ == other.space_, "functions live on different spaces");
        std::vector<std::complex<double>> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
        return SampledFunction(*space_, std::move(v), id.empty() ? id_ + "+" + other.id_ : std::move(id));
    }

private:
    const PointSpace* space_;
    std::vector<std::complex<double>> values_;
    std::string id_;
    std::vector<PointId> support_;
    double max_abs_ = 0.0;
};

// ---------------------------------------------------------------------------
// Lebesgue norms
// ---------------------------------------------------------------------------

// (sum |f|^p w)^{1/p}, max |f| for p = inf. Values are normalized by max|f|
// internally so extreme magnitudes cannot underflow through the power.
inline double lebesgue_norm(const SampledFunction& f, double p) {
    require(p >= 1.0, "lebesgue_norm: need p >= 1");
    double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    if (is_inf(p)) return scale;
    KahanSum s;
    for (PointId i : f.support())
        s.add(std::pow(f.abs(i) / scale, p) * f.space().weight(i));
    return scale * std::pow(s.value(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Rearrangement tables
// ---------------------------------------------------------------------------

class Rearrangement {
public:
    explicit Rearrangement(const SampledFunction& f) : total_(f.space().total_measure()) {
        std::vector<std::pair<double, double>> vw;  // (|f|, weight), positive values only
        vw.reserve(f.support().size());
        for (PointId i : f.support()) vw.emplace_back(f.abs(i), f.space().weight(i));
        std::sort(vw.begin(), vw.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (auto& [v, w] : vw) {
            if (!value_.empty() && value_.back() == v) {
                wcum_.back() += w;
            } else {
                value_.push_back(v);
                wcum_.push_back((wcum_.empty() ? 0.0 : wcum_.back()) + w);
            }
        }
        icum_.resize(value_.size());
        double prevW = 0.0, acc = 0.0;
        for (std::size_t k = 0; k < value_.size(); ++k) {
            acc += value_[k] * (wcum_[k] - prevW);
            icum_[k] = acc;
            prevW = wcum_[k];
        }
    }

    std::size_t steps() const { return value_.size(); }
    double threshold(std::size_t k) const { return value_[k]; }
    double cum_measure(std::size_t k) const { return wcum_[k]; }
    double total_measure() const { return total_; }
    double support_measure() const { return wcum_.empty() ? 0.0 : wcum_.back(); }
    double integral_total() const { return icum_.empty() ? 0.0 : icum_.back(); }
    double max_value() const { return value_.empty() ? 0.0 : value_.front(); }

    // lambda_f(alpha) = mu({ |f| > alpha })
    double lambda(double alpha) const {
        require(alpha > 0, "distribution: alpha must be positive");
        // largest k with value_[k] > alpha; wcum_ is increasing as values fall
        auto it = std::lower_bound(value_.begin(), value_.end(), alpha,
                                   [](double v, double a) { return v > a; });
        if (it == value_.begin()) return 0.0;
        return wcum_[static_cast<std::size_t>(it - value_.begin()) - 1];
    }

    // f_*(t) = inf { alpha > 0 : lambda_f(alpha) <= t }
    double f_star(double t) const {
        require(t > 0, "decreasing rearrangement: t must be positive");
        auto it = std::upper_bound(wcum_.begin(), wcum_.end(), t);
        if (it == wcum_.end()) return 0.0;
        return value_[static_cast<std::size_t>(it - wcum_.begin())];
    }

    // running integral I(t) = int_0^t f_*(u) du
    double integral(double t) const {
        if (t <= 0 || value_.empty()) return 0.0;
        auto it = std::upper_bound(wcum_.begin(), wcum_.end(), t);
        if (it == wcum_.end()) return icum_.back();
        std::size_t k = static_cast<std::size_t>(it - wcum_.begin());
        double prevW = k == 0 ? 0.0 : wcum_[k - 1];
        double prevI = k == 0 ? 0.0 : icum_[k - 1];
        return prevI + value_[k] * (t - prevW);
    }

    // f^*(t) = I(t) / t
    double f_star_avg(double t) const {
        require(t > 0, "average rearrangement: t must be positive");
        return integral(t) / t;
    }

private:
    std::vector<double> value_;  // strictly decreasing positive thresholds
    std::vector<double> wcum_;   // mu({|f| >= value_[k]}), increasing
    std::vector<double> icum_;   // int_0^{wcum_[k]} f_*
    double total_;

    friend class LorentzEvaluator;
};

inline double distribution(const SampledFunction& f, double alpha) {
    return Rearrangement(f).lambda(alpha);
}

inline double decreasing_rearrangement(const SampledFunction& f, double t) {
    return Rearrangement(f).f_star(t);
}

inline double average_rearrangement(const SampledFunction& f, double t) {
    return Rearrangement(f).f_star_avg(t);
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes for the averaged Lorentz integral
// ---------------------------------------------------------------------------

namespace detail {

struct GaussLegendre {
    std::vector<double> x, w;  // nodes/weights on [-1, 1]
    explicit GaussLegendre(int n) {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[static_cast<std::size_t>(i)] = t;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre& gl48() {
    static const GaussLegendre g(48);
    return g;
}

template <class F>
double integrate(double a, double b, F&& f) {
    // split log-wide intervals so the rule sees mild integrands
    if (a > 0 && b / a > 4.0) {
        double mid = std::sqrt(a * b);
        return integrate(a, mid, f) + integrate(mid, b, f);
    }
    const auto& g = gl48();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    KahanSum s;
    for (std::size_t i = 0; i < g.x.size(); ++i) s.add(g.w[i] * f(c + h * g.x[i]));
    return h * s.value();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lorentz norms
// ---------------------------------------------------------------------------

class LorentzEvaluator {
public:
    explicit LorentzEvaluator(const SampledFunction& f)
        : scale_(f.max_abs()), re_(f.scaled(scale_ > 0 ? 1.0 / scale_ : 1.0)) {}

    // quasinorm through f_*: exact power integrals of the step function
    double quasinorm(double p, double q) const {
        require(p >= 1.0 && q >= 1.0, "lorentz: need p, q >= 1");
        if (scale_ == 0.0) return 0.0;
        if (is_inf(q)) {
            if (is_inf(p)) return scale_ * re_.max_value();
            double best = 0.0;
            for (std::size_t k = 0; k < re_.steps(); ++k)
                best = std::max(best,
                                re_.threshold(k) * std::pow(re_.cum_measure(k), 1.0 / p));
            return scale_ * best;
        }
        if (is_inf(p)) return kInf;  // f != 0: the dt/t integral diverges at 0
        KahanSum s;
        double prevW = 0.0;
        for (std::size_t k = 0; k < re_.steps(); ++k) {
            double W = re_.cum_measure(k);
            s.add(std::pow(re_.threshold(k), q) * (p / q) *
                  (std::pow(W, q / p) - std::pow(prevW, q / p)));
            prevW = W;
        }
        return scale_ * std::pow((p / q) * s.value(), 1.0 / q);
    }

    // norm through f^*
    double norm(double p, double q) const {
        require(p >= 1.0 && q >= 1.0, "lorentz: need p, q >= 1");
        if (scale_ == 0.0) return 0.0;
        if (is_inf(q)) return scale_ * sup_weighted_avg(p);
        if (is_inf(p)) return kInf;   // f^*(0+) > 0 makes the integral diverge
        if (p == 1.0) return kInf;    // tail I(t)^q / t is not integrable
        KahanSum s;
        double prevW = 0.0;
        for (std::size_t k = 0; k < re_.steps(); ++k) {
            double W = re_.cum_measure(k);
            double v = re_.threshold(k);
            double prevI = k == 0 ? 0.0 : re_.icum_[k - 1];
            double c = prevI - v * prevW;  // I(t) = v t + c on [prevW, W)
            if (c == 0.0) {
                s.add(std::pow(v, q) * (p / q) * (std::pow(W, q / p) - std::pow(prevW, q / p)));
            } else {
                s.add(detail::integrate(prevW, W, [&](double t) {
                    return std::pow(t, q / p - 1.0) * std::pow(v + c / t, q);
                }));
            }
            prevW = W;
        }
        double Itot = re_.integral_total();
        if (Itot > 0 && prevW > 0)
            s.add(std::pow(Itot, q) * std::pow(prevW, q / p - q) / (q - q / p));
        return scale_ * std::pow((p / q) * s.value(), 1.0 / q);
    }

    // sup_alpha alpha lambda_f(alpha)^{1/p}: the identity partner of the
    // (p, inf) quasinorm, computed from the lambda table
    double weak_from_lambda(double p) const {
        if (scale_ == 0.0) return 0.0;
        double best = 0.0;
        for (std::size_t k = 0; k < re_.steps(); ++k) {
            // lambda = cum_measure(k) exactly on [value_{k+1}, value_k)
            double lam = re_.cum_measure(k);
            double alpha_sup = re_.threshold(k);
            best = std::max(best, alpha_sup * (is_inf(p) ? 1.0 : std::pow(lam, 1.0 / p)));
        }
        return scale_ * best;
    }

    const Rearrangement& table() const { return re_; }
    double scale() const { return scale_; }

private:
    double sup_weighted_avg(double p) const {
        if (is_inf(p)) return re_.max_value();  // sup f^* = f^*(0+)
        // t^{1/p} f^*(t) is decreasing-then-increasing per interval, so the
        // sup sits at a breakpoint or in the tail
        double best = 0.0;
        for (std::size_t k = 0; k < re_.steps(); ++k) {
            double W = re_.cum_measure(k);
            best = std::max(best, std::pow(W, 1.0 / p) * re_.integral(W) / W);
        }
        // tail: I_tot t^{1/p - 1}, decreasing for p > 1, constant for p = 1
        double Itot = re_.integral_total(), Wend = re_.support_measure();
        if (Wend > 0) {
            if (p == 1.0)
                best = std::max(best, Itot);
            else
                best = std::max(best, Itot * std::pow(Wend, 1.0 / p - 1.0));
        }
        return best;
    }

    double scale_;
    Rearrangement re_;
};

inline double lorentz_quasinorm(const SampledFunction& f, double p, double q) {
    return LorentzEvaluator(f).quasinorm(p, q);
}

inline double lorentz_norm(const SampledFunction& f, double p, double q) {
    return LorentzEvaluator(f).norm(p, q);
}

// closed-form layer cake: ||f||_p^p = p int_0^infty alpha^{p-1} lambda(alpha) d alpha
inline double layer_cake_pnorm(const SampledFunction& f, double p) {
    require(p >= 1.0 && !is_inf(p), "layer_cake_pnorm: need finite p >= 1");
    double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    Rearrangement re(f.scaled(1.0 / scale));
    KahanSum s;
    for (std::size_t k = 0; k < re.steps(); ++k) {
        double hi = re.threshold(k);
        double lo = k + 1 < re.steps() ? re.threshold(k + 1) : 0.0;
        s.add(re.cum_measure(k) * (std::pow(hi, p) - std::pow(lo, p)));
    }
    return scale * std::pow(s.value(), 1.0 / p);
}

}  // namespace fmn
