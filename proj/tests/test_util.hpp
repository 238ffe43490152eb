#pragma once

// Random generators shared by the test suites.

#include "secrecy/types.hpp"

#include <random>

namespace secrecy::testing
{

inline CVector random_cvector(int n, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = scale * Complex(nd(rng), nd(rng));
    return v;
}

inline CMatrix random_psd(int n, std::mt19937_64& rng, double trace = 1.0)
{
    CMatrix B(n, n);
    for (int j = 0; j < n; ++j)
        B.col(j) = random_cvector(n, rng);
    CMatrix A = hermitian_part(B * B.adjoint());
    return A * (trace / A.trace().real());
}

/// Uniform point in the ball of radius eps around c, or on its surface.
inline CVector sample_ball(const CVector& c, double eps, std::mt19937_64& rng, bool surface = false)
{
    const auto n = c.size();
    CVector d = random_cvector(static_cast<int>(n), rng);
    d /= d.norm();
    double r = eps;
    if (!surface)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        r = eps * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(n)));
    }
    return c + r * d;
}

} // namespace secrecy::testing
