#include "stablecz/special.hpp"

#include <cmath>
#include <stdexcept>

namespace stablecz {
namespace special {

namespace {

// Power series sum_k (-1)^k (u^2/4)^k / (k! (nu+1)_k) with nu = n/2-1.
// Accurate for small and moderate u; cancellation stays mild below the
// switch point used in lambda_n.
double lambda_series(int n, double u) {
    const double nu = 0.5 * n - 1.0;
    const double q = -0.25 * u * u;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// Spherical Bessel j_l by upward recurrence (stable for u > l here since
// the large-argument branch is only entered with u above the series
// switch point).
double spherical_j(int l, double u) {
    const double jm1 = std::cos(u) / u;
    double j0 = std::sin(u) / u;
    if (l == -1) return jm1;
    if (l == 0) return j0;
    double prev = jm1, cur = j0;
    for (int m = 0; m < l; ++m) {
        double next = (2 * m + 1) / u * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double double_factorial_odd(int l) {
    // (2l+1)!! with (-1)!! = 1
    double r = 1.0;
    for (int m = 2 * l + 1; m > 1; m -= 2) r *= m;
    return r;
}

double bessel_jn(int nu, double u) {
    double j0 = ::j0(u);
    if (nu == 0) return j0;
    double j1 = ::j1(u);
    if (nu == 1) return j1;
    double prev = j0, cur = j1;
    for (int m = 1; m < nu; ++m) {
        double next = 2.0 * m / u * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

double lambda_n(int n, double u) {
    if (n < 1) throw std::invalid_argument("lambda_n: dimension must be >= 1");
    u = std::abs(u);
    if (u < 6.0) return lambda_series(n, u);
    if (n % 2 == 1) {
        // odd n: Lambda_n = (2l+1)!! j_l(u) / u^l with l = (n-3)/2
        const int l = (n - 3) / 2;
        return double_factorial_odd(l) * spherical_j(l, u) / std::pow(u, l);
    }
    // even n: Lambda_n = nu! (2/u)^nu J_nu(u) with nu = n/2-1
    const int nu = n / 2 - 1;
    double fact = 1.0;
    for (int m = 2; m <= nu; ++m) fact *= m;
    return fact * std::pow(2.0 / u, nu) * bessel_jn(nu, u);
}

double lambda_n_deriv(int n, int k, double u) {
    switch (k) {
        case 0:
            return lambda_n(n, u);
        case 1:
            return -(u / n) * lambda_n(n + 2, u);
        case 2:
            return -lambda_n(n + 2, u) / n +
                   u * u / (double(n) * (n + 2)) * lambda_n(n + 4, u);
        case 3:
            return 3.0 * u / (double(n) * (n + 2)) * lambda_n(n + 4, u) -
                   u * u * u / (double(n) * (n + 2) * (n + 4)) *
                       lambda_n(n + 6, u);
        default:
            throw std::invalid_argument("lambda_n_deriv: order must be 0..3");
    }
}

}  // namespace special
}  // namespace stablecz
