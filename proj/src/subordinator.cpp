#include "stablecz/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stablecz {
namespace subordinator {

namespace {

constexpr double kPi = std::numbers::pi;

// Zolotarev angular function for the one-sided stable density, in log
// form to stay finite near theta = pi:
//   log V(theta) = [b log sin(b t) + (1-b) log sin((1-b) t) - log sin t]/(1-b)
double log_zolotarev_v(double beta, double theta) {
    const double b1 = 1.0 - beta;
    return (beta * std::log(std::sin(beta * theta)) +
            b1 * std::log(std::sin(b1 * theta)) - std::log(std::sin(theta))) /
           b1;
}

// eta(1,s) for the pure stable subordinator via the contour-collapsed
// Bromwich integral (Zolotarev form): with c = s^{-beta/(1-beta)},
//   eta(1,s) = beta/(pi (1-beta)) s^{-1/(1-beta)}
//              * integral_0^pi V e^{-c V} dtheta.
double eta_zolotarev(double beta, double s, const quad::QuadTol& tol) {
    const double b1 = 1.0 - beta;
    const double c = std::pow(s, -beta / b1);
    const double v0 = std::pow(beta, beta / b1) * b1;  // V(0+)
    if (c * v0 > 745.0) return 0.0;  // below double range

    auto integrand = [beta, c](double theta) {
        const double lv = log_zolotarev_v(beta, theta);
        if (lv > 700.0) return 0.0;
        const double v = std::exp(lv);
        const double e = c * v;
        if (e > 745.0) return 0.0;
        return v * std::exp(-e);
    };
    // geometric clustering toward both endpoints: the integrand has a
    // boundary layer at 0 for small s and near pi for s close to the
    // series switch point
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (int j = 22; j >= 1; --j) breaks.push_back(kPi * std::pow(0.5, j + 1));
    for (int j = 1; j <= 22; ++j)
        breaks.push_back(kPi * (1.0 - std::pow(0.5, j + 1)));
    breaks.push_back(kPi);
    quad::QuadResult q = quad::integrate_segmented(integrand, breaks, tol);
    return beta / (kPi * b1) * std::pow(s, -1.0 / b1) * q.value;
}

// Convergent large-s series: eta(1,s) = (1/pi) sum_k (-1)^{k+1}
// Gamma(k beta + 1)/k! sin(pi k beta) s^{-k beta - 1}.
double eta_series(double beta, double s) {
    const double ls = std::log(s);
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 400; ++k) {
        const double mag = std::exp(std::lgamma(k * beta + 1.0) -
                                    std::lgamma(k + 1.0) - (k * beta + 1.0) * ls);
        const double term =
            ((k % 2) ? 1.0 : -1.0) * mag * std::sin(kPi * k * beta) / kPi;
        sum += term;
        if (mag < 1e-18 * std::abs(sum) && mag < prev) break;
        prev = mag;
    }
    return sum;
}

constexpr double kSeriesSwitch = 2.0;

double eta_pure(double beta, double s, const quad::QuadTol& tol) {
    if (s >= kSeriesSwitch) return eta_series(beta, s);
    return eta_zolotarev(beta, s, tol);
}

// Analytic tail integral_S^inf eta(1,s) ds from the series, term by term.
double eta_tail_mass(double beta, double S) {
    const double lS = std::log(S);
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double mag = std::exp(std::lgamma(k * beta + 1.0) -
                                    std::lgamma(k + 1.0) - k * beta * lS);
        const double term = ((k % 2) ? 1.0 : -1.0) * mag *
                            std::sin(kPi * k * beta) / (kPi * k * beta);
        sum += term;
        if (mag < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

void SubordinatorSpec::validate(bool allow_degenerate) const {
    const bool ok =
        index > 0.0 && (allow_degenerate ? index <= 1.0 : index < 1.0);
    if (!ok)
        throw std::invalid_argument("subordinator index must lie in (0,1)");
    if (!(mass >= 0.0))
        throw std::invalid_argument("subordinator mass must be >= 0");
}

double laplace_exponent(const SubordinatorSpec& spec, double lambda) {
    spec.validate(true);
    if (!(lambda >= 0.0))
        throw std::invalid_argument("laplace_exponent: lambda must be >= 0");
    // pow(mass, 1/index) is exactly 0 at mass = 0, so the relativistic
    // formula reduces bitwise to the pure one
    const double shift = std::pow(spec.mass, 1.0 / spec.index);
    return std::pow(lambda + shift, spec.index) - spec.mass;
}

double eval_eta_contour(const SubordinatorSpec& spec, double s,
                        quad::QuadTol tol) {
    spec.validate();
    if (!(s > 0.0)) throw std::invalid_argument("eval_eta: s must be > 0");
    const double pure = eta_pure(spec.index, s, tol);
    const double shift = std::pow(spec.mass, 1.0 / spec.index);
    return std::exp(spec.mass - shift * s) * pure;
}

double eval_eta(const SubordinatorSpec& spec, double s, quad::QuadTol tol) {
    spec.validate();
    if (!(s > 0.0)) throw std::invalid_argument("eval_eta: s must be > 0");
    double pure;
    if (spec.index == 0.5) {
        // (2 sqrt(pi))^{-1} s^{-3/2} e^{-1/(4s)}
        pure = 0.5 / std::sqrt(kPi) * std::pow(s, -1.5) * std::exp(-0.25 / s);
    } else {
        pure = eta_pure(spec.index, s, tol);
    }
    const double shift = std::pow(spec.mass, 1.0 / spec.index);
    return std::exp(spec.mass - shift * s) * pure;
}

double laplace_residual(const SubordinatorSpec& spec, double lambda,
                        quad::QuadTol tol) {
    spec.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("laplace_residual: lambda must be > 0");
    const double s_hi = std::max(200.0, 60.0 / lambda);
    auto f = [&](double s) { return std::exp(-lambda * s) * eval_eta(spec, s); };
    quad::QuadResult q = quad::integrate_log(f, 1e-8, s_hi, tol);
    const double target = std::exp(-laplace_exponent(spec, lambda));
    return std::abs(q.value - target);
}

double eta_normalization(const SubordinatorSpec& spec, quad::QuadTol tol) {
    spec.validate();
    const double S = 1e4;
    auto f = [&](double s) { return eval_eta(spec, s); };
    quad::QuadResult q = quad::integrate_log(f, 1e-8, S, tol);
    double tail;
    if (spec.mass == 0.0) {
        tail = eta_tail_mass(spec.index, S);
    } else {
        // exponential cutoff makes the remainder negligible once
        // m^{1/index} S is large; otherwise extend numerically
        const double c = std::pow(spec.mass, 1.0 / spec.index);
        double S2 = S;
        tail = 0.0;
        while (c * S2 < 60.0 && S2 < 1e16) {
            quad::QuadResult ext = quad::integrate_log(f, S2, S2 * 100, tol);
            tail += ext.value;
            S2 *= 100;
        }
    }
    return q.value + tail;
}

EtaBound check_etabound(const SubordinatorSpec& spec, double s_lo, double s_hi,
                        int n_points, double stability_rel, double s_cap) {
    spec.validate();
    if (!(s_lo > 0.0) || !(s_hi > s_lo) || n_points < 2)
        throw std::invalid_argument("check_etabound: bad grid");
    const double per_decade = n_points / std::log10(s_hi / s_lo);

    auto sup_on = [&](double lo, double hi) {
        const int m = std::max(2, int(per_decade * std::log10(hi / lo)));
        double sup = 0.0;
        for (int i = 0; i < m; ++i) {
            const double s = lo * std::pow(hi / lo, double(i) / (m - 1));
            sup = std::max(sup, std::pow(s, 1.0 + spec.index) *
                                    eval_eta(spec, s));
        }
        return sup;
    };

    EtaBound out;
    double sup = sup_on(s_lo, s_hi);
    double hi = s_hi;
    while (hi < s_cap) {
        const double ext = sup_on(hi, hi * 2.0);
        const double sup2 = std::max(sup, ext);
        const double change = (sup2 - sup) / std::max(sup2, 1e-300);
        sup = sup2;
        hi *= 2.0;
        if (change < stability_rel) {
            out.stable = true;
            break;
        }
    }
    out.constant = sup;
    out.s_hi = hi;
    return out;
}

double check_growth(const SubordinatorSpec& spec) {
    spec.validate(true);
    const int m = 25;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double lam = 1e2 * std::pow(1e4, double(i) / (m - 1));
        const double x = std::log(lam);
        const double y = std::log(laplace_exponent(spec, lam));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double check_fourierray(const SubordinatorSpec& spec, quad::QuadTol tol) {
    spec.validate(true);
    auto f = [&](double t) {
        const double q = 2.0 * kPi * t;
        const double e = 2.0 * laplace_exponent(spec, q * q);
        return (e > 745.0) ? 0.0 : t * std::exp(-e);
    };
    // cutoff where 2 Phi((2 pi t)^2) exceeds the exp underflow budget
    double t_hi = 1.0;
    while (2.0 * laplace_exponent(
               spec, std::pow(2.0 * kPi * t_hi, 2.0)) < 60.0 &&
           t_hi < 1e12)
        t_hi *= 2.0;
    quad::QuadResult head = quad::integrate(f, 0.0, 1e-6, tol);
    quad::QuadResult body = quad::integrate_log(f, 1e-6, t_hi, tol);
    if (!body.converged && !head.converged)
        throw std::runtime_error("fourierray integral did not converge");
    return head.value + body.value;
}

}  // namespace subordinator
}  // namespace stablecz
