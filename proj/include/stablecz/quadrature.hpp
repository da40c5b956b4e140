#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace stablecz {
namespace quad {

/// Result of a numerical integration, with an a-posteriori error estimate.
struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evals = 0;
    bool converged = false;
    double resabs = 0.0;  // integral of |f|, for roundoff-floor detection

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        abs_error += o.abs_error;
        evals += o.evals;
        converged = converged && o.converged;
        resabs += o.resabs;
        return *this;
    }
};

/// Tolerances for adaptive integration. Convergence is declared when the
/// error estimate drops below max(abs_tol, rel_tol*|value|), or when the
/// panel error sits at the double-precision floor of integral |f|.
struct QuadTol {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 30;
    long max_evals = 2'000'000;
};

namespace detail {

// 15-point Gauss-Kronrod pair on [-1,1] (QUADPACK dqk15 constants).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// One Gauss-Kronrod 7/15 panel. Returns (kronrod value, error estimate).
template <class F>
inline QuadResult gk15_panel(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kGK15WeightsG[3];
    double resk = fc * kGK15WeightsK[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kGK15Nodes[j];
        fv1[j] = f(c - x);
        fv2[j] = f(c + x);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kGK15WeightsG[j / 2] * fsum;
        resk += kGK15WeightsK[j] * fsum;
        resabs += kGK15WeightsK[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    const double reskh = resk * 0.5;
    double resasc = kGK15WeightsK[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGK15WeightsK[j] *
                  (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    resasc *= h;
    resabs *= h;

    QuadResult r;
    r.value = resk * h;
    r.evals = 15;
    r.resabs = resabs;
    double err = std::abs((resk - resg) * h);
    // QUADPACK error sharpening: the raw |K-G| difference is pessimistic.
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    r.abs_error = std::max(err, eps50);
    r.converged = true;
    return r;
}

template <class F>
inline void adapt_rec(const F& f, double a, double b, double tol, int depth,
                      QuadResult& acc, const QuadTol& opt, long& budget) {
    QuadResult p = gk15_panel(f, a, b);
    budget -= p.evals;
    // accept when within tolerance, at the double-precision floor
    // (subdivision cannot improve), or out of depth/evals
    const double floor_err =
        120.0 * std::numeric_limits<double>::epsilon() * p.resabs;
    const bool give_up = depth >= opt.max_depth || budget <= 0;
    if (p.abs_error <= tol || p.abs_error <= floor_err || give_up) {
        acc.value += p.value;
        acc.abs_error += p.abs_error;
        acc.evals += p.evals;
        acc.resabs += p.resabs;
        if (p.abs_error > tol && p.abs_error > floor_err && give_up)
            acc.converged = false;
        return;
    }
    acc.evals += p.evals;
    const double c = 0.5 * (a + b);
    adapt_rec(f, a, c, 0.5 * tol, depth + 1, acc, opt, budget);
    adapt_rec(f, c, b, 0.5 * tol, depth + 1, acc, opt, budget);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a,b].
/// The relative tolerance is measured against max(|I|, |I|_abs/2), so
/// regions that are negligible on the |f| scale are not over-refined.
template <class F>
QuadResult integrate(const F& f, double a, double b, QuadTol opt = {}) {
    QuadResult acc;
    acc.converged = true;
    if (a == b) return acc;
    // First pass to set the scale of the relative tolerance.
    QuadResult coarse = detail::gk15_panel(f, a, b);
    const double scale =
        std::max(std::abs(coarse.value), 0.5 * coarse.resabs);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * scale);
    long budget = opt.max_evals;
    detail::adapt_rec(f, a, b, tol, 0, acc, opt, budget);
    return acc;
}

/// Adaptive integration with user-supplied interior break points (the
/// integrand is integrated independently on each sub-interval).
template <class F>
QuadResult integrate_segmented(const F& f, const std::vector<double>& breaks,
                               QuadTol opt = {}) {
    QuadResult acc;
    acc.converged = true;
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        QuadResult r = integrate(f, breaks[k], breaks[k + 1], opt);
        acc += r;
    }
    return acc;
}

/// Wynn epsilon-algorithm accelerator for a sequence of partial sums.
/// push() returns the current best extrapolation. The rolling diagonal is
/// capped (oldest entries dropped pairwise) to keep the table short.
class WynnEpsilon {
  public:
    double push(double partial_sum) {
        table_.push_back(partial_sum);
        const int n = static_cast<int>(table_.size()) - 1;
        double aux2 = 0.0;
        bool frozen = false;
        for (int j = n; j >= 1; --j) {
            const double aux1 = aux2;
            aux2 = table_[j - 1];
            const double delta = table_[j] - aux2;
            const double scale =
                std::max(std::abs(table_[j]), std::abs(aux2));
            if (std::abs(delta) <=
                1e-15 * scale + std::numeric_limits<double>::min()) {
                // converged to rounding level: freeze and truncate
                estimate_ = table_[j];
                error_ = std::abs(delta) + 1e-15 * scale;
                table_.resize(j + 1);
                frozen = true;
                break;
            }
            table_[j - 1] = aux1 + 1.0 / delta;
        }
        if (!frozen) {
            const int best = (static_cast<int>(table_.size()) - 1) % 2;
            estimate_ = table_[best];
            error_ = std::abs(estimate_ - prev_estimate_);
        }
        prev_estimate_ = estimate_;
        if (table_.size() > 64) table_.erase(table_.begin(), table_.begin() + 2);
        return (n < 2) ? partial_sum : estimate_;
    }

    double estimate() const { return estimate_; }
    double error() const { return error_; }
    size_t count() const { return table_.size(); }

  private:
    std::vector<double> table_;
    double estimate_ = 0.0;
    double prev_estimate_ = 0.0;
    double error_ = std::numeric_limits<double>::infinity();
};

/// Integrate f over [0, inf) when f oscillates with (approximate) sign
/// changes at the given break points: partial integrals over consecutive
/// breaks are summed and extrapolated with the epsilon algorithm. The
/// breaks callable maps k=0,1,2,... to an increasing sequence of points
/// with breaks(0) == 0. The first `warmup_panels` panels (covering any
/// non-monotone part of the amplitude) accumulate plainly; acceleration
/// starts afterwards.
template <class F, class Breaks>
QuadResult integrate_oscillatory(const F& f, const Breaks& breaks,
                                 QuadTol opt = {}, int warmup_panels = 6,
                                 int max_panels = 400) {
    QuadResult acc;
    acc.converged = false;
    QuadTol panel_opt = opt;
    panel_opt.abs_tol = opt.abs_tol * 1e-2;
    panel_opt.rel_tol = std::min(opt.rel_tol, 1e-12);

    WynnEpsilon eps;
    double partial = 0.0;
    double scale = 0.0;
    double best = 0.0;
    int accelerated = 0;
    int small_streak = 0;
    for (int k = 0; k < max_panels; ++k) {
        const double a = breaks(k), b = breaks(k + 1);
        QuadResult p = integrate(f, a, b, panel_opt);
        acc.evals += p.evals;
        acc.abs_error += p.abs_error;
        partial += p.value;
        scale = std::max(scale, std::abs(p.value));
        if (k >= warmup_panels) {
            best = eps.push(partial);
            ++accelerated;
        }

        const double tol = std::max(
            opt.abs_tol, opt.rel_tol * std::max(std::abs(best),
                                                std::abs(partial)));
        if (std::abs(p.value) < 0.05 * tol && k >= warmup_panels)
            ++small_streak;
        else
            small_streak = 0;
        if (small_streak >= 3) {
            // decayed tail; the plain partial sum is already converged
            acc.value = partial;
            acc.abs_error += std::abs(p.value);
            acc.converged = true;
            return acc;
        }
        if (accelerated >= 6 && eps.error() < 0.5 * tol && scale > 0.0) {
            acc.value = best;
            acc.abs_error += eps.error();
            acc.converged = true;
            return acc;
        }
    }
    acc.value = accelerated >= 6 ? best : partial;
    acc.abs_error += (accelerated >= 6) ? eps.error() : scale;
    return acc;
}

/// Integrate f over [a,b] after the substitution x = e^v (natural for
/// integrands with power-law endpoint behaviour). Requires 0 < a < b.
template <class F>
QuadResult integrate_log(const F& f, double a, double b, QuadTol opt = {}) {
    if (!(a > 0.0) || !(b > a))
        throw std::invalid_argument("integrate_log: need 0 < a < b");
    auto g = [&f](double v) {
        const double x = std::exp(v);
        return f(x) * x;
    };
    return integrate(g, std::log(a), std::log(b), opt);
}

}  // namespace quad
}  // namespace stablecz
