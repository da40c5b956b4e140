#pragma once

#include <Eigen/Core>
#include <memory>

#include "stablecz/density.hpp"
#include "stablecz/quadrature.hpp"
#include "stablecz/symbol.hpp"

namespace stablecz {
namespace kernel {

struct KernelEvaluation {
    double value = 0.0;
    double quadrature_error = 0.0;
};

/// Which of the two bound routes to use for the geometric constants:
/// `semigroup` collapses the spatial convolution (valid for x-independent
/// coefficients, required when an index is vertical); `general` keeps the
/// full (n+1)-dimensional positive integral (spatial indices only).
enum class BoundRoute { semigroup, general };

/// Evaluator for the singular kernels
///   K_A(x,xt) = int_0^inf int 2y A(xb,y) grad phi_y(xb-xt) . grad
///               phi_y(xb-x) dxb dy
/// of a stable spec, entry by entry. Entry (l,m) pairs the m-th gradient
/// component with the xt slot and the l-th with the x slot. Vertical
/// derivatives are taken in the scale parameter of phi_y itself.
/// Immutable and safe for concurrent use once constructed.
class KernelEvaluator {
  public:
    explicit KernelEvaluator(density::StableSpec spec,
                             quad::QuadTol tol = {1e-10, 1e-7, 30});

    const density::StableSpec& spec() const { return spec_; }
    const density::RadialInterpolant& radial() const { return *itp_; }

    /// Entry with an x-independent coefficient, via the Fourier-side
    /// collapse of the xb convolution; indices may be vertical (n+1).
    KernelEvaluation entry_semigroup(const symbols::Entry& a, int l, int m,
                                     const Eigen::VectorXd& u) const;

    /// Spatial entry with a general coefficient a(x,y): nested adaptive
    /// quadrature over (xb, y). Requires l,m <= n and dim <= 2.
    KernelEvaluation entry_general(const symbols::Entry& a, int l, int m,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& xt) const;

    /// Full kernel: sum of entries, each routed to the cheapest valid
    /// method (semigroup whenever the entry is x-independent).
    KernelEvaluation full(const symbols::MatrixSymbol& A,
                          const Eigen::VectorXd& x,
                          const Eigen::VectorXd& xt) const;

    /// Direction-dependent size constant: |entry| <= ||a||_inf * C /
    /// |x-xt|^n with C the returned value at the given unit direction.
    double size_constant(int l, int m, const Eigen::VectorXd& direction,
                         BoundRoute route) const;

    /// One extra spatial derivative (direction k): witnesses the
    /// |x-xt|^{-n-1} gradient bound.
    double smoothness_constant(int l, int m, int k,
                               const Eigen::VectorXd& direction,
                               BoundRoute route) const;

    /// Case-1 integrand k_{lm}(y, u): the exact xb-collapsed kernel
    /// density at height y and offset u (exposed for tests).
    double collapsed_integrand(int l, int m, double y,
                               const Eigen::VectorXd& u) const;
    /// Spatial derivative d/du_k of the above.
    double collapsed_integrand_grad(int l, int m, int k, double y,
                                    const Eigen::VectorXd& u) const;

  private:
    density::StableSpec spec_;
    std::shared_ptr<const density::RadialInterpolant> itp_;
    quad::QuadTol tol_;
    double scale_c_;  // 2^{1/alpha}

    double dphi_y(int i, const Eigen::VectorXd& w, double y) const;
    double d2phi_y(int i, int j, const Eigen::VectorXd& w, double y) const;
    double inner_xbar(const symbols::Entry& a, int l, int m, int grad_k,
                      const Eigen::VectorXd& x, const Eigen::VectorXd& xt,
                      double y, double rel_tol, bool absolute) const;
};

}  // namespace kernel
}  // namespace stablecz
