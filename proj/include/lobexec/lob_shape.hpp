#pragma once

#include <vector>

namespace lobexec {

// Order-book shape f and its calculus:
//   F(x)       = integral of f from 0 to x          (volume at offset x)
//   F_inv(v)   = price offset holding volume v
//   F_tilde(x) = integral of y*f(y) from 0 to x     (cash at offset x)
//   G(v)       = F_tilde(F_inv(v))                  (cash at volume v)
// Block and power-law shapes use closed forms; tabulated shapes use monotone
// piecewise-cubic interpolation with constant tails (keeps f positive and F
// strictly increasing with F(+-inf) = +-inf).
class Shape {
public:
    enum class Kind { block, power_law, tabulated };

    static Shape block();
    static Shape power_law(double gamma);  // f(x) = |x|^gamma, gamma > -1
    static Shape tabulated(std::vector<double> x, std::vector<double> f);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }  // 0 for block
    bool closed_form() const { return kind_ != Kind::tabulated; }

    // f(0) = +inf for power law with gamma < 0; callers must guard.
    double density(double x) const;
    double density_prime(double x) const;
    double F(double x) const;
    double F_inv(double v) const;
    double F_tilde(double x) const;
    double G(double v) const;

private:
    Shape() = default;

    Kind kind_ = Kind::block;
    double gamma_ = 0.0;

    // Tabulated data: PCHIP slopes plus cumulative integrals at the knots.
    std::vector<double> tx_, tf_, slope_, cumF_, cumFt_;
    double tab_value(double x) const;
    double tab_deriv(double x) const;
    double tab_F(double x) const;
    double tab_F_tilde(double x) const;
    double tab_F_inv(double v) const;
};

}  // namespace lobexec
