#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "stablecz/quadrature.hpp"

namespace stablecz {
namespace density {

enum class ProcessKind { pure_stable, relativistic };

/// Rotationally invariant stable (or relativistic stable) process on R^n,
/// normalized so that the characteristic function of X_1 is exp(-rho(|xi|)).
struct StableSpec {
    double alpha = 1.0;
    int dim = 1;
    ProcessKind kind = ProcessKind::pure_stable;
    double mass = 0.0;

    void validate() const;
    bool relativistic() const { return kind == ProcessKind::relativistic; }

    /// Levy exponent: rho(r) = r^alpha, or (r^2+m^{2/alpha})^{alpha/2} - m.
    double rho(double r) const;
    double rho_d1(double r) const;
    double rho_d2(double r) const;
    bool operator==(const StableSpec&) const = default;
};

/// Direct-quadrature evaluator of the radial profile F with phi(x) = F(|x|)
/// and its first three radial derivatives, by differentiated Fourier
/// inversion reduced to one-dimensional oscillatory integrals.
class RadialDensity {
  public:
    explicit RadialDensity(StableSpec spec,
                           quad::QuadTol tol = {1e-14, 1e-11, 48});

    /// F^(k)(r) for k = 0..3.
    double deriv(int k, double r) const;
    double operator()(double r) const { return deriv(0, r); }

    /// Radial profile V of the pure second vertical derivative,
    /// d^2/dz^2 phi_z(x) = z^{-n-2} V(|x|/z), computed from its own
    /// Fourier weight ((s rho')^2 - s^2 rho'') e^{-rho} rather than from
    /// the cancellation-prone combination of F, F', F''. k = 0 gives V,
    /// k = 1 gives V'.
    double vertical(int k, double r) const;

    const StableSpec& spec() const { return spec_; }

  private:
    StableSpec spec_;
    quad::QuadTol tol_;
    double cutoff_[6];  // integration cutoff per derivative order
    double speak_[6];   // location of the weight's maximum
    double front_;      // (2 pi)^{-n} |S^{n-1}|

    double radial_integral(int slot, int p, int lambda_order, bool vertical,
                           double r) const;
};

/// Tabulated radial profile of phi with tail metadata (the artifact
/// exported by the profile CLI subcommand).
struct RadialProfile {
    StableSpec spec;
    Eigen::ArrayXd radii;  // strictly increasing, r > 0
    Eigen::ArrayXd phi;    // F(r)
    Eigen::ArrayXd dphi;   // F'(r)
    Eigen::ArrayXd d2phi;  // pure radial second derivative F''(r); the
                           // tangential Hessian component is dphi/r
    double tail_exponent = 0.0;  // n + alpha
};

RadialProfile build_profile(const StableSpec& spec, double r_min = 1e-3,
                            double r_max = 1e3, int n_points = 2000,
                            int threads = 0);

void save_profile_json(const RadialProfile&, const std::string& path,
                       const std::string& config_json = "{}");
RadialProfile load_profile_json(const std::string& path);

/// Weighted decay suprema measured over a tabulated profile:
///   c0 = sup (1+r^2)^{(n+alpha)/2}   |phi|
///   c1 = sup (1+r^2)^{(n+1+alpha)/2} |grad phi|
///   c2 = sup (1+r^2)^{(n+2+alpha)/2} |Hess phi|   (operator norm)
struct DecayConstants {
    double c0 = 0, c1 = 0, c2 = 0;
    bool conclusive = false;  // suprema stable when the outer half of the
                              // table is dropped
    double drift = 0.0;       // max relative change under that truncation
};
DecayConstants decay_constants(const RadialProfile&);

/// Cubic-Hermite interpolant (in log r) of F and its first three radial
/// derivatives, with even Taylor continuation at r -> 0 and power-law
/// tails r^{-(n+alpha+k)} beyond the table. Immutable once built.
class RadialInterpolant {
  public:
    explicit RadialInterpolant(const StableSpec& spec, double r_min = 1e-3,
                               double r_max = 1e3, int n_points = 2400,
                               int threads = 0);

    double deriv(int k, double r) const;  // k = 0..3
    const StableSpec& spec() const { return spec_; }

    struct Bundle {
        double f, f1, f2, f3;
    };
    Bundle all(double r) const;

    /// Tabulated vertical profile V (k = 0) and V' (k = 1); see
    /// RadialDensity::vertical.
    double vert(int k, double r) const;

  private:
    StableSpec spec_;
    double t0_, dt_, r_min_, r_max_;
    Eigen::ArrayXd vals_[4];   // node values of F..F'''
    Eigen::ArrayXd slope3_;    // d/dt of F''' nodes (finite differences)
    double taylor_[3];         // F(0), F''(0), F''''(0)
    double tail_coef_[4];      // F^(k)(r_max) for power-law continuation
    Eigen::ArrayXd vert_[2];   // V, V'
    Eigen::ArrayXd vslope1_;   // d/dt of V' nodes
    double vtaylor_[2];        // V(0), V''(0)
    double vtail_coef_[2];     // V^(k)(r_max)
    double vtail_exp_;         // fitted tail exponent of V

    double eval_order(int k, double r) const;
};

// ---------------------------------------------------------------------
// Point operations

/// phi(x) by radial Fourier inversion; strictly positive.
double eval_density_fourier(const StableSpec& spec, const Eigen::VectorXd& x,
                            quad::QuadTol tol = {1e-14, 1e-11, 48});

/// phi(x) by subordination: integral of Gaussian kernels against the
/// alpha/2-stable subordinator density. alpha = 2 returns the Gaussian
/// closed form (deterministic clock).
double eval_density_subordination(const StableSpec& spec,
                                  const Eigen::VectorXd& x,
                                  quad::QuadTol tol = {1e-12, 1e-9, 48});

/// phi_y(x) = y^{-n} phi(x/y), y > 0.
double eval_scaled(const StableSpec& spec, const Eigen::VectorXd& x, double y,
                   quad::QuadTol tol = {1e-14, 1e-11, 48});

Eigen::VectorXd grad_density(const StableSpec& spec, const Eigen::VectorXd& x,
                             quad::QuadTol tol = {1e-14, 1e-11, 48});
Eigen::MatrixXd second_derivs(const StableSpec& spec, const Eigen::VectorXd& x,
                              quad::QuadTol tol = {1e-14, 1e-11, 48});

}  // namespace density
}  // namespace stablecz
