#include "lobexec/lob_shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// 3-point Gauss-Legendre on [a, b]; exact through degree 5, enough for the
// quartic y*f(y) with cubic segments.
template <typename Fn>
double gauss3(Fn&& fn, double a, double b) {
    static const double node = 0.7745966692414834;  // sqrt(3/5)
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    return h * (5.0 / 9.0 * (fn(m - h * node) + fn(m + h * node)) + 8.0 / 9.0 * fn(m));
}

// Fritsch-Carlson monotone slopes for a positive data set.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), d(n - 1), m(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        d[k] = (y[k + 1] - y[k]) / h[k];
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) {
            s = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    if (n == 2) {
        m[0] = m[1] = d[0];
    } else {
        m[0] = endpoint(h[0], h[1], d[0], d[1]);
        m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }
    return m;
}

}  // namespace

Shape Shape::block() {
    Shape s;
    s.kind_ = Kind::block;
    return s;
}

Shape Shape::power_law(double gamma) {
    if (!(gamma > -1.0)) throw ConfigError("power-law exponent must exceed -1");
    Shape s;
    s.kind_ = Kind::power_law;
    s.gamma_ = gamma;
    return s;
}

Shape Shape::tabulated(std::vector<double> x, std::vector<double> f) {
    if (x.size() != f.size() || x.size() < 2) {
        throw ConfigError("tabulated shape needs matching x/f arrays with >= 2 points");
    }
    for (std::size_t k = 1; k < x.size(); ++k) {
        if (!(x[k] > x[k - 1])) throw ConfigError("tabulated x must be strictly increasing");
    }
    if (!(x.front() < 0.0 && x.back() > 0.0)) {
        throw ConfigError("tabulated range must straddle 0");
    }
    for (double v : f) {
        if (!(v > 0.0)) throw ConfigError("tabulated f must be positive everywhere");
    }
    Shape s;
    s.kind_ = Kind::tabulated;
    s.tx_ = std::move(x);
    s.tf_ = std::move(f);
    s.slope_ = pchip_slopes(s.tx_, s.tf_);
    // Cumulative integrals from the first knot; rebased to 0 afterwards.
    const std::size_t n = s.tx_.size();
    s.cumF_.assign(n, 0.0);
    s.cumFt_.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        s.cumF_[k] = s.cumF_[k - 1] + gauss3([&](double u) { return s.tab_value(u); },
                                             s.tx_[k - 1], s.tx_[k]);
        s.cumFt_[k] = s.cumFt_[k - 1] + gauss3([&](double u) { return u * s.tab_value(u); },
                                               s.tx_[k - 1], s.tx_[k]);
    }
    return s;
}

double Shape::density(double x) const {
    switch (kind_) {
        case Kind::block:
            return 1.0;
        case Kind::power_law:
            if (x == 0.0) {
                if (gamma_ > 0.0) return 0.0;
                if (gamma_ == 0.0) return 1.0;
                return std::numeric_limits<double>::infinity();
            }
            return std::pow(std::abs(x), gamma_);
        case Kind::tabulated:
            return tab_value(x);
    }
    return 1.0;
}

double Shape::density_prime(double x) const {
    switch (kind_) {
        case Kind::block:
            return 0.0;
        case Kind::power_law:
            if (x == 0.0) {
                if (gamma_ > 1.0 || gamma_ == 0.0) return 0.0;
                return std::numeric_limits<double>::quiet_NaN();
            }
            return gamma_ * std::pow(std::abs(x), gamma_) / x;
        case Kind::tabulated:
            return tab_deriv(x);
    }
    return 0.0;
}

double Shape::F(double x) const {
    switch (kind_) {
        case Kind::block:
            return x;
        case Kind::power_law:
            return sgn(x) * std::pow(std::abs(x), gamma_ + 1.0) / (gamma_ + 1.0);
        case Kind::tabulated:
            return tab_F(x);
    }
    return x;
}

double Shape::F_inv(double v) const {
    switch (kind_) {
        case Kind::block:
            return v;
        case Kind::power_law:
            return sgn(v) * std::pow((gamma_ + 1.0) * std::abs(v), 1.0 / (gamma_ + 1.0));
        case Kind::tabulated:
            return tab_F_inv(v);
    }
    return v;
}

double Shape::F_tilde(double x) const {
    switch (kind_) {
        case Kind::block:
            return 0.5 * x * x;
        case Kind::power_law:
            return std::pow(std::abs(x), gamma_ + 2.0) / (gamma_ + 2.0);
        case Kind::tabulated:
            return tab_F_tilde(x);
    }
    return 0.5 * x * x;
}

double Shape::G(double v) const {
    switch (kind_) {
        case Kind::block:
            return 0.5 * v * v;
        case Kind::power_law:
            return std::pow((gamma_ + 1.0) * std::abs(v), (gamma_ + 2.0) / (gamma_ + 1.0)) /
                   (gamma_ + 2.0);
        case Kind::tabulated:
            return tab_F_tilde(tab_F_inv(v));
    }
    return 0.5 * v * v;
}

double Shape::tab_value(double x) const {
    if (x <= tx_.front()) return tf_.front();
    if (x >= tx_.back()) return tf_.back();
    const auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - tx_.begin());
    const double h = tx_[k] - tx_[k - 1];
    const double s = (x - tx_[k - 1]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * tf_[k - 1] + h10 * h * slope_[k - 1] + h01 * tf_[k] + h11 * h * slope_[k];
}

double Shape::tab_deriv(double x) const {
    if (x <= tx_.front() || x >= tx_.back()) return 0.0;
    const auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - tx_.begin());
    const double h = tx_[k] - tx_[k - 1];
    const double s = (x - tx_[k - 1]) / h;
    const double s2 = s * s;
    const double d00 = (6.0 * s2 - 6.0 * s) / h;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = (-6.0 * s2 + 6.0 * s) / h;
    const double d11 = 3.0 * s2 - 2.0 * s;
    return d00 * tf_[k - 1] + d10 * slope_[k - 1] + d01 * tf_[k] + d11 * slope_[k];
}

double Shape::tab_F(double x) const {
    // cum arrays integrate from tx_.front(); subtract the value at 0.
    auto raw = [&](double u) -> double {
        if (u <= tx_.front()) return cumF_.front() + tf_.front() * (u - tx_.front());
        if (u >= tx_.back()) return cumF_.back() + tf_.back() * (u - tx_.back());
        const auto it = std::upper_bound(tx_.begin(), tx_.end(), u);
        const std::size_t k = static_cast<std::size_t>(it - tx_.begin());
        return cumF_[k - 1] + gauss3([&](double s) { return tab_value(s); }, tx_[k - 1], u);
    };
    return raw(x) - raw(0.0);
}

double Shape::tab_F_tilde(double x) const {
    auto raw = [&](double u) -> double {
        if (u <= tx_.front()) {
            const double a = tx_.front();
            return cumFt_.front() + tf_.front() * 0.5 * (u * u - a * a);
        }
        if (u >= tx_.back()) {
            const double b = tx_.back();
            return cumFt_.back() + tf_.back() * 0.5 * (u * u - b * b);
        }
        const auto it = std::upper_bound(tx_.begin(), tx_.end(), u);
        const std::size_t k = static_cast<std::size_t>(it - tx_.begin());
        return cumFt_[k - 1] +
               gauss3([&](double s) { return s * tab_value(s); }, tx_[k - 1], u);
    };
    return raw(x) - raw(0.0);
}

double Shape::tab_F_inv(double v) const {
    if (v == 0.0) return 0.0;
    // Constant tails make F linear outside the table: invert directly.
    const double Flo = tab_F(tx_.front());
    const double Fhi = tab_F(tx_.back());
    if (v <= Flo) return tx_.front() + (v - Flo) / tf_.front();
    if (v >= Fhi) return tx_.back() + (v - Fhi) / tf_.back();
    double lo = tx_.front();
    double hi = tx_.back();
    const double x = find_root_bracketed([&](double u) { return tab_F(u) - v; }, lo, hi,
                                         1e-14, 1e-12, 1.0 + std::abs(v));
    return x;
}

}  // namespace lobexec
