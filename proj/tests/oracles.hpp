#ifndef SZLAB_TESTS_ORACLES_HPP
#define SZLAB_TESTS_ORACLES_HPP

#include "szlab/szlab.hpp"

#include <random>

namespace oracle {

using namespace szlab;
using cd = std::complex<double>;

inline CArray<double> random_field(std::mt19937_64& rng, Index n)
{
    std::normal_distribution<double> N(0.0, 1.0);
    CArray<double> f(n);
    for (Index j = 0; j < n; ++j)
        f(j) = {N(rng), N(rng)};
    return f;
}

inline CField<double> random_field2(std::mt19937_64& rng, Index nx, Index ny)
{
    std::normal_distribution<double> N(0.0, 1.0);
    CField<double> f(nx, ny);
    for (Index i = 0; i < nx; ++i)
        for (Index j = 0; j < ny; ++j)
            f(i, j) = {N(rng), N(rng)};
    return f;
}

// Direct quadratic-cost transform from the definition u^(xi) = (1/2pi) int exp(-i x xi) u dx.
inline CArray<double> dft_direct(const Grid1D<double>& g, const CArray<double>& f)
{
    CArray<double> c(g.n);
    for (Index m = 0; m < g.n; ++m) {
        cd s = 0;
        for (Index j = 0; j < g.n; ++j)
            s += std::exp(cd(0, -g.xi(m) * g.x(j))) * f(j);
        c(m) = s * g.dx() / (2 * pi_v<double>);
    }
    return c;
}

inline CArray<double> idft_direct(const Grid1D<double>& g, const CArray<double>& c)
{
    CArray<double> f(g.n);
    for (Index j = 0; j < g.n; ++j) {
        cd s = 0;
        for (Index m = 0; m < g.n; ++m)
            s += std::exp(cd(0, g.xi(m) * g.x(j))) * c(m);
        f(j) = s * g.dxi();
    }
    return f;
}

// Linear (non-wrapping) convolution sum for the coefficients of a conj(b) c, Nyquist cleared.
inline CArray<double> cubic_convolution(const Grid1D<double>& g, const CArray<double>& a, const CArray<double>& b,
                                        const CArray<double>& c)
{
    const Index h = g.n / 2;
    auto at = [&](const CArray<double>& v, Index k) { return (k < -h || k >= h) ? cd(0) : v(k + h); };
    CArray<double> out = CArray<double>::Zero(g.n);
    const double w = g.dxi() * g.dxi();
    for (Index k = -h + 1; k < h; ++k) {
        cd s = 0;
        for (Index k1 = -h; k1 < h; ++k1)
            for (Index k3 = -h; k3 < h; ++k3) {
                const Index k2 = k1 + k3 - k; // conj(b) contributes -k2
                s += at(a, k1) * std::conj(at(b, k2)) * at(c, k3);
            }
        out(k + h) = s * w;
    }
    return out;
}

inline double rel_err(const CArray<double>& a, const CArray<double>& b)
{
    const double d = (a - b).matrix().norm();
    const double s = b.matrix().norm();
    return s > 0 ? d / s : d;
}

inline double rel_err(const CField<double>& a, const CField<double>& b)
{
    const double d = (a - b).matrix().norm();
    const double s = b.matrix().norm();
    return s > 0 ? d / s : d;
}

} // namespace oracle

#endif
