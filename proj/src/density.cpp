#include "stablecz/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stablecz/jsonio.hpp"
#include "stablecz/parallel.hpp"
#include "stablecz/special.hpp"
#include "stablecz/subordinator.hpp"

namespace stablecz {
namespace density {

namespace {

constexpr double kPi = std::numbers::pi;

// (2 pi)^{-n} |S^{n-1}| = 2^{1-n} pi^{-n/2} / Gamma(n/2)
double radial_front(int n) {
    return std::pow(2.0, 1.0 - n) * std::pow(kPi, -0.5 * n) /
           std::tgamma(0.5 * n);
}

}  // namespace

void StableSpec::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw std::invalid_argument("alpha must lie in (0,2]");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (!(mass >= 0.0)) throw std::invalid_argument("mass must be >= 0");
    if (kind == ProcessKind::pure_stable && mass != 0.0)
        throw std::invalid_argument("pure stable spec cannot carry a mass");
}

double StableSpec::rho(double r) const {
    if (kind == ProcessKind::pure_stable)
        return std::pow(r, alpha);
    const double m2a = std::pow(mass, 2.0 / alpha);
    return std::pow(r * r + m2a, 0.5 * alpha) - mass;
}

double StableSpec::rho_d1(double r) const {
    if (kind == ProcessKind::pure_stable)
        return alpha * std::pow(r, alpha - 1.0);
    const double m2a = std::pow(mass, 2.0 / alpha);
    return alpha * r * std::pow(r * r + m2a, 0.5 * alpha - 1.0);
}

double StableSpec::rho_d2(double r) const {
    if (kind == ProcessKind::pure_stable)
        return alpha * (alpha - 1.0) * std::pow(r, alpha - 2.0);
    const double m2a = std::pow(mass, 2.0 / alpha);
    const double q = r * r + m2a;
    return alpha * std::pow(q, 0.5 * alpha - 2.0) * (q + (alpha - 2.0) * r * r);
}

// ---------------------------------------------------------------------
// RadialDensity

namespace {

// the vertical Fourier weight (s rho'(s))^2 - s^2 rho''(s), so that
// d^2/dz^2 phi_z at z=1 is the inversion of weight * e^{-rho}
double vertical_weight(const StableSpec& sp, double s) {
    const double a = s * sp.rho_d1(s);
    return a * a - s * s * sp.rho_d2(s);
}

}  // namespace

RadialDensity::RadialDensity(StableSpec spec, quad::QuadTol tol)
    : spec_(spec), tol_(tol) {
    spec_.validate();
    if (spec_.dim > 10)
        throw std::invalid_argument("radial inversion supports dim <= 10");
    front_ = radial_front(spec_.dim);
    // slots 0..3: s^{n-1+k} e^{-rho}; slots 4..5: vertical weight, k = 0,1
    for (int slot = 0; slot < 6; ++slot) {
        const bool vert = slot >= 4;
        const int p = spec_.dim - 1 + (vert ? slot - 4 : slot);
        auto logw = [&](double s) {
            double lw = p * std::log(s) - spec_.rho(s);
            if (vert) {
                const double w = vertical_weight(spec_, s);
                lw += std::log(std::abs(w) + 1e-300);
            }
            return lw;
        };
        double best = -std::numeric_limits<double>::infinity(), sp = 1.0;
        for (int i = 0; i <= 400; ++i) {
            const double s = std::pow(10.0, -6.0 + 18.0 * i / 400.0);
            const double lw = logw(s);
            if (lw > best) {
                best = lw;
                sp = s;
            }
        }
        speak_[slot] = sp;
        double S = std::max(sp, 1.0);
        while (logw(S) > best - 50.0 && S < 1e14) S *= 1.25;
        cutoff_[slot] = S;
    }
}

double RadialDensity::radial_integral(int slot, int p, int lambda_order,
                                      bool vertical, double r) const {
    const int n = spec_.dim;
    const StableSpec& sp = spec_;
    auto integrand = [&sp, n, p, lambda_order, vertical, r](double s) {
        const double lw = (p > 0 ? p * std::log(s) : 0.0) - sp.rho(s);
        if (lw < -745.0) return 0.0;
        double w = std::exp(lw);
        if (vertical) w *= vertical_weight(sp, s);
        return w * special::lambda_n_deriv(n, lambda_order, r * s);
    };

    const double S = cutoff_[slot];
    quad::QuadResult q;
    if (r * S / kPi <= 8.0) {
        std::vector<double> breaks{0.0};
        if (speak_[slot] > 1e-12 && speak_[slot] < S)
            breaks.push_back(speak_[slot]);
        breaks.push_back(S);
        q = quad::integrate_segmented(integrand, breaks, tol_);
    } else {
        const double h = kPi / r;
        auto breaks = [h](int j) { return j * h; };
        const int warmup = static_cast<int>(r * speak_[slot] / kPi) + 8;
        q = quad::integrate_oscillatory(integrand, breaks, tol_, warmup,
                                        warmup + 2000);
    }
    return front_ * q.value;
}

double RadialDensity::deriv(int k, double r) const {
    if (k < 0 || k > 3)
        throw std::invalid_argument("radial derivative order must be 0..3");
    if (k > 0 && spec_.dim > 4)
        throw std::invalid_argument("radial derivatives support dim <= 4");
    return radial_integral(k, spec_.dim - 1 + k, k, false, std::abs(r));
}

double RadialDensity::vertical(int k, double r) const {
    if (k < 0 || k > 1)
        throw std::invalid_argument("vertical profile order must be 0 or 1");
    return radial_integral(4 + k, spec_.dim - 1 + k, k, true, std::abs(r));
}

// ---------------------------------------------------------------------
// Point operations

double eval_density_fourier(const StableSpec& spec, const Eigen::VectorXd& x,
                            quad::QuadTol tol) {
    spec.validate();
    if (x.size() != spec.dim)
        throw std::invalid_argument("point dimension mismatch");
    RadialDensity f(spec, tol);
    return f(x.norm());
}

double eval_scaled(const StableSpec& spec, const Eigen::VectorXd& x, double y,
                   quad::QuadTol tol) {
    if (!(y > 0.0)) throw std::invalid_argument("eval_scaled: y must be > 0");
    spec.validate();
    RadialDensity f(spec, tol);
    return std::pow(y, -spec.dim) * f(x.norm() / y);
}

Eigen::VectorXd grad_density(const StableSpec& spec, const Eigen::VectorXd& x,
                             quad::QuadTol tol) {
    spec.validate();
    const double r = x.norm();
    if (r == 0.0) return Eigen::VectorXd::Zero(spec.dim);
    RadialDensity f(spec, tol);
    return f.deriv(1, r) / r * x;
}

Eigen::MatrixXd second_derivs(const StableSpec& spec,
                              const Eigen::VectorXd& x, quad::QuadTol tol) {
    spec.validate();
    const int n = spec.dim;
    RadialDensity f(spec, tol);
    const double r = x.norm();
    if (r == 0.0)
        return f.deriv(2, 0.0) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd u = x / r;
    const double f1 = f.deriv(1, r), f2 = f.deriv(2, r);
    Eigen::MatrixXd P = u * u.transpose();
    return f2 * P + f1 / r * (Eigen::MatrixXd::Identity(n, n) - P);
}

double eval_density_subordination(const StableSpec& spec,
                                  const Eigen::VectorXd& x,
                                  quad::QuadTol tol) {
    spec.validate();
    if (x.size() != spec.dim)
        throw std::invalid_argument("point dimension mismatch");
    const int n = spec.dim;
    const double r2 = x.squaredNorm();
    if (spec.alpha == 2.0) {
        // deterministic clock: Gaussian closed form
        return std::pow(4.0 * kPi, -0.5 * n) * std::exp(-0.25 * r2);
    }
    subordinator::SubordinatorSpec sub{0.5 * spec.alpha, spec.mass};
    auto integrand = [&](double s) {
        const double g = std::pow(4.0 * kPi * s, -0.5 * n) *
                         std::exp(-0.25 * r2 / s);
        return (g == 0.0) ? 0.0 : g * subordinator::eval_eta(sub, s);
    };
    double S = std::max(100.0, 10.0 * r2);
    if (spec.mass > 0.0) {
        const double c = std::pow(spec.mass, 2.0 / spec.alpha);
        S = std::max(S, 60.0 / std::max(c, 1e-12));
        S = std::min(S, 1e15);
    }
    quad::QuadResult q = quad::integrate_log(integrand, 1e-8, S, tol);

    double tail = 0.0;
    if (spec.mass == 0.0) {
        // analytic tail: heavy-tail series of eta against the expanded
        // Gaussian factor
        const double beta = 0.5 * spec.alpha;
        const double lS = std::log(S);
        for (int k = 1; k <= 60; ++k) {
            const double ak = ((k % 2) ? 1.0 : -1.0) *
                              std::exp(std::lgamma(k * beta + 1.0) -
                                       std::lgamma(k + 1.0)) *
                              std::sin(kPi * k * beta) / kPi;
            double jterm = 0.0, pw = 1.0;
            for (int j = 0; j <= 8; ++j) {
                const double expo = 0.5 * n + k * beta + j;
                jterm += pw * std::exp(-expo * lS) / expo;
                pw *= -0.25 * r2 / (j + 1);
            }
            const double contrib =
                ak * std::pow(4.0 * kPi, -0.5 * n) * jterm;
            tail += contrib;
            if (std::abs(contrib) < 1e-18 * std::abs(q.value + tail) && k > 4)
                break;
        }
    }
    return q.value + tail;
}

// ---------------------------------------------------------------------
// Profiles

RadialProfile build_profile(const StableSpec& spec, double r_min, double r_max,
                            int n_points, int threads) {
    spec.validate();
    if (!(r_min > 0.0) || !(r_max > r_min) || n_points < 8)
        throw std::invalid_argument("build_profile: bad grid");
    RadialProfile p;
    p.spec = spec;
    p.tail_exponent = spec.dim + spec.alpha;
    p.radii.resize(n_points);
    p.phi.resize(n_points);
    p.dphi.resize(n_points);
    p.d2phi.resize(n_points);
    const double t0 = std::log(r_min), dt = std::log(r_max / r_min) / (n_points - 1);
    RadialDensity f(spec);
    parallel_for(
        n_points,
        [&](std::size_t i) {
            const double r = std::exp(t0 + i * dt);
            p.radii[i] = r;
            p.phi[i] = f.deriv(0, r);
            p.dphi[i] = f.deriv(1, r);
            p.d2phi[i] = f.deriv(2, r);
        },
        threads);
    for (int i = 0; i < n_points; ++i) {
        if (!(p.phi[i] >= 0.0) || !std::isfinite(p.phi[i]))
            throw std::runtime_error("profile: non-positive density value");
    }
    return p;
}

DecayConstants decay_constants(const RadialProfile& p) {
    const int n = p.spec.dim;
    const double a = p.spec.alpha;
    auto sup_upto = [&](double r_cap) {
        double c0 = 0, c1 = 0, c2 = 0;
        for (int i = 0; i < p.radii.size(); ++i) {
            const double r = p.radii[i];
            if (r > r_cap) break;
            const double w = 1.0 + r * r;
            const double hess =
                (n == 1) ? std::abs(p.d2phi[i])
                         : std::max(std::abs(p.d2phi[i]),
                                    std::abs(p.dphi[i]) / r);
            c0 = std::max(c0, std::pow(w, 0.5 * (n + a)) * std::abs(p.phi[i]));
            c1 = std::max(c1,
                          std::pow(w, 0.5 * (n + 1 + a)) * std::abs(p.dphi[i]));
            c2 = std::max(c2, std::pow(w, 0.5 * (n + 2 + a)) * hess);
        }
        return std::array<double, 3>{c0, c1, c2};
    };
    const double r_max = p.radii[p.radii.size() - 1];
    auto full = sup_upto(r_max * 1.01);
    auto half = sup_upto(r_max * 0.5);
    DecayConstants d;
    d.c0 = full[0];
    d.c1 = full[1];
    d.c2 = full[2];
    d.drift = 0.0;
    for (int j = 0; j < 3; ++j)
        d.drift = std::max(d.drift, (full[j] - half[j]) /
                                        std::max(full[j], 1e-300));
    d.conclusive = d.drift < 0.01;
    return d;
}

void save_profile_json(const RadialProfile& p, const std::string& path,
                       const std::string& config_json) {
    json j;
    j["spec"] = {{"alpha", p.spec.alpha},
                 {"dim", p.spec.dim},
                 {"kind", p.spec.relativistic() ? "relativistic"
                                                : "pure_stable"},
                 {"mass", p.spec.mass}};
    auto arr = [](const Eigen::ArrayXd& a) {
        return std::vector<double>(a.data(), a.data() + a.size());
    };
    j["radii"] = arr(p.radii);
    j["phi"] = arr(p.phi);
    j["dphi"] = arr(p.dphi);
    j["d2phi"] = arr(p.d2phi);
    j["tail_exponent"] = p.tail_exponent;
    j["config"] = json::parse(config_json);
    atomic_write_json(path, j);
}

RadialProfile load_profile_json(const std::string& path) {
    json j = read_json(path);
    RadialProfile p;
    p.spec.alpha = j["spec"]["alpha"].get<double>();
    p.spec.dim = j["spec"]["dim"].get<int>();
    p.spec.kind = j["spec"]["kind"].get<std::string>() == "relativistic"
                      ? ProcessKind::relativistic
                      : ProcessKind::pure_stable;
    p.spec.mass = j["spec"].value("mass", 0.0);
    auto arr = [&](const char* key) {
        auto v = j[key].get<std::vector<double>>();
        return Eigen::Map<const Eigen::ArrayXd>(v.data(), v.size()).eval();
    };
    p.radii = arr("radii");
    p.phi = arr("phi");
    p.dphi = arr("dphi");
    p.d2phi = arr("d2phi");
    p.tail_exponent = j.value("tail_exponent", p.spec.dim + p.spec.alpha);
    p.spec.validate();
    return p;
}

// ---------------------------------------------------------------------
// RadialInterpolant

RadialInterpolant::RadialInterpolant(const StableSpec& spec, double r_min,
                                     double r_max, int n_points, int threads)
    : spec_(spec), r_min_(r_min), r_max_(r_max) {
    spec_.validate();
    t0_ = std::log(r_min);
    dt_ = std::log(r_max / r_min) / (n_points - 1);
    for (auto& v : vals_) v.resize(n_points);
    RadialDensity f(spec_);
    parallel_for(
        n_points,
        [&](std::size_t i) {
            const double r = std::exp(t0_ + i * dt_);
            for (int k = 0; k < 4; ++k) vals_[k][i] = f.deriv(k, r);
        },
        threads);

    taylor_[0] = f.deriv(0, 0.0);
    taylor_[1] = f.deriv(2, 0.0);
    {
        // F''''(0) = 3 c_n M_4 / (n (n+2)) with M_4 the (n+3)-rd moment of
        // e^{-rho}
        const int n = spec_.dim;
        auto w = [&](double s) {
            const double lw = (n + 3) * std::log(s) - spec_.rho(s);
            return lw < -745.0 ? 0.0 : std::exp(lw);
        };
        double S = 1.0;
        while ((n + 3) * std::log(S) - spec_.rho(S) > -60.0 && S < 1e12)
            S *= 1.5;
        quad::QuadResult m4 = quad::integrate(w, 0.0, S, {1e-14, 1e-11, 48});
        taylor_[2] = 3.0 * radial_front(n) * m4.value / (double(n) * (n + 2));
    }

    slope3_.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const int lo = std::max(0, i - 1), hi = std::min(n_points - 1, i + 1);
        slope3_[i] = (vals_[3][hi] - vals_[3][lo]) / ((hi - lo) * dt_);
    }
    for (int k = 0; k < 4; ++k) tail_coef_[k] = vals_[k][n_points - 1];

    // vertical profile V with d^2/dz^2 phi_z = z^{-n-2} V(|x|/z)
    for (auto& v : vert_) v.resize(n_points);
    parallel_for(
        n_points,
        [&](std::size_t i) {
            const double r = std::exp(t0_ + i * dt_);
            vert_[0][i] = f.vertical(0, r);
            vert_[1][i] = f.vertical(1, r);
        },
        threads);
    vslope1_.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const int lo = std::max(0, i - 1), hi = std::min(n_points - 1, i + 1);
        vslope1_[i] = (vert_[1][hi] - vert_[1][lo]) / ((hi - lo) * dt_);
    }
    vtaylor_[0] = f.vertical(0, 0.0);
    {
        // V''(0) from the Lambda''(0) = -1/n series term
        const int n = spec_.dim;
        auto w = [&](double s) {
            const double lw = (n + 1) * std::log(s) - spec_.rho(s);
            return lw < -745.0 ? 0.0
                               : std::exp(lw) * vertical_weight(spec_, s);
        };
        double S = 1.0;
        while ((n + 1) * std::log(S) - spec_.rho(S) > -60.0 && S < 1e12)
            S *= 1.5;
        quad::QuadResult m2 = quad::integrate(w, 0.0, S, {1e-14, 1e-11, 48});
        vtaylor_[1] = -radial_front(n) * m2.value / n;
    }
    vtail_coef_[0] = vert_[0][n_points - 1];
    vtail_coef_[1] = vert_[1][n_points - 1];
    {
        // fitted log-log slope over the last decade (the vertical profile
        // tail exponent depends on alpha through term cancellations)
        const int span = std::max(4, int(std::log(10.0) / dt_));
        const int i1 = n_points - 1, i0 = std::max(0, i1 - span);
        const double v0 = std::abs(vert_[0][i0]), v1 = std::abs(vert_[0][i1]);
        vtail_exp_ = (v0 > 0 && v1 > 0) ? std::log(v0 / v1) / ((i1 - i0) * dt_)
                                        : spec_.dim + spec_.alpha + 2.0;
    }
}

double RadialInterpolant::eval_order(int k, double r) const {
    const int n = spec_.dim;
    if (r < r_min_) {
        const double T0 = taylor_[0], T2 = taylor_[1], T4 = taylor_[2];
        switch (k) {
            case 0: return T0 + 0.5 * T2 * r * r + T4 * r * r * r * r / 24.0;
            case 1: return T2 * r + T4 * r * r * r / 6.0;
            case 2: return T2 + 0.5 * T4 * r * r;
            default: return T4 * r;
        }
    }
    if (r > r_max_) {
        const double expo = n + spec_.alpha + k;
        return tail_coef_[k] * std::pow(r / r_max_, -expo);
    }
    const double t = std::log(r);
    int i = static_cast<int>((t - t0_) / dt_);
    i = std::clamp(i, 0, int(vals_[0].size()) - 2);
    const double s = (t - (t0_ + i * dt_)) / dt_;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double v0 = vals_[k][i], v1 = vals_[k][i + 1];
    double d0, d1;
    if (k < 3) {
        const double r0 = std::exp(t0_ + i * dt_), r1 = r0 * std::exp(dt_);
        d0 = vals_[k + 1][i] * r0;
        d1 = vals_[k + 1][i + 1] * r1;
    } else {
        d0 = slope3_[i];
        d1 = slope3_[i + 1];
    }
    return h00 * v0 + h10 * dt_ * d0 + h01 * v1 + h11 * dt_ * d1;
}

double RadialInterpolant::deriv(int k, double r) const {
    if (k < 0 || k > 3)
        throw std::invalid_argument("interpolant order must be 0..3");
    return eval_order(k, std::abs(r));
}

RadialInterpolant::Bundle RadialInterpolant::all(double r) const {
    r = std::abs(r);
    return {eval_order(0, r), eval_order(1, r), eval_order(2, r),
            eval_order(3, r)};
}

double RadialInterpolant::vert(int k, double r) const {
    if (k < 0 || k > 1)
        throw std::invalid_argument("vertical profile order must be 0 or 1");
    r = std::abs(r);
    if (r < r_min_) {
        return k == 0 ? vtaylor_[0] + 0.5 * vtaylor_[1] * r * r
                      : vtaylor_[1] * r;
    }
    if (r > r_max_) {
        return vtail_coef_[k] * std::pow(r / r_max_, -(vtail_exp_ + k));
    }
    const double t = std::log(r);
    int i = static_cast<int>((t - t0_) / dt_);
    i = std::clamp(i, 0, int(vert_[0].size()) - 2);
    const double s = (t - (t0_ + i * dt_)) / dt_;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double v0 = vert_[k][i], v1 = vert_[k][i + 1];
    double d0, d1;
    if (k == 0) {
        const double r0 = std::exp(t0_ + i * dt_), r1 = r0 * std::exp(dt_);
        d0 = vert_[1][i] * r0;
        d1 = vert_[1][i + 1] * r1;
    } else {
        d0 = vslope1_[i];
        d1 = vslope1_[i + 1];
    }
    return h00 * v0 + h10 * dt_ * d0 + h01 * v1 + h11 * dt_ * d1;
}

}  // namespace density
}  // namespace stablecz
