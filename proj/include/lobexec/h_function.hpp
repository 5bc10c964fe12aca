#pragma once

#include "lobexec/lob_shape.hpp"

namespace lobexec {

// Marginal-cost transforms behind the Lagrange characterization of the
// optimum. One instance binds either an interval's decay coefficients
// (discrete) or an instant's rho/eta (continuous) together with the shape.
// Block and power-law shapes invert in closed form; tabulated shapes fall
// back to a monotone root find with a sampled monotonicity check.
class HFunction {
public:
    enum class Kind { v_discrete, v_continuous, p_discrete, p_continuous };

    static HFunction v_discrete(double a, double a_tilde, const Shape& shape);
    static HFunction v_continuous(double rho, double eta, const Shape& shape);
    static HFunction p_discrete(double a, double a_hat, const Shape& shape);
    static HFunction p_continuous(double rho, double eta, const Shape& shape);

    double eval(double x) const;
    double invert(double v) const;
    // False only for the decreasing bijection of the continuous-P case (ii).
    bool increasing() const;
    Kind kind() const { return kind_; }

private:
    HFunction(Kind kind, const Shape& shape) : kind_(kind), shape_(&shape) {}

    Kind kind_;
    const Shape* shape_;
    double a_ = 0.0;      // interval decay (discrete kinds)
    double b_ = 0.0;      // a_tilde or a_hat
    double rho_ = 0.0;    // continuous kinds
    double eta_ = 0.0;
    double coef_ = 0.0;   // closed-form coefficient, see implementation
    bool closed_ = false;

    double eval_generic(double x) const;
    double invert_generic(double v) const;
};

}  // namespace lobexec
