#pragma once

namespace stablecz {
namespace special {

/// Normalized radial plane-wave average in dimension n:
///   Lambda_n(u) = Gamma(n/2) (2/u)^{n/2-1} J_{n/2-1}(u),
/// i.e. the mean of exp(-i u <e,w>) over unit vectors w, with
/// Lambda_n(0) = 1. Special cases: Lambda_1 = cos, Lambda_2 = J_0,
/// Lambda_3 = sin(u)/u, Lambda_4 = 2 J_1(u)/u.
double lambda_n(int n, double u);

/// k-th derivative of Lambda_n (k = 0..3), via the ladder identity
/// Lambda_n'(u) = -(u/n) Lambda_{n+2}(u).
double lambda_n_deriv(int n, int k, double u);

}  // namespace special
}  // namespace stablecz
