#ifndef SZLAB_PROJECTORS_HPP
#define SZLAB_PROJECTORS_HPP

#include "szlab/fft.hpp"

#include <cmath>

namespace szlab {

// Smooth plateau bump: 1 on |x| <= 1, 0 on |x| >= 2.
template <typename Scalar>
Scalar psi0(Scalar x)
{
    using std::abs;
    using std::exp;
    const Scalar a = abs(x);
    if (a <= Scalar(1))
        return Scalar(1);
    if (a >= Scalar(2))
        return Scalar(0);
    const Scalar s = a - Scalar(1);
    return exp(Scalar(1) - Scalar(1) / (Scalar(1) - s * s));
}

template <typename Scalar>
Scalar lp_phi(Scalar x)
{
    return psi0(x) - psi0(Scalar(2) * x);
}

inline bool keeps(Sign s, Index wavenumber)
{
    return s == Sign::Plus ? wavenumber >= 0 : wavenumber < 0;
}

// Pi_+ keeps eta >= 0 (zero bin included), Pi_- = Id - Pi_+.
template <typename Scalar>
CArray<Scalar> szego_project(const Grid1D<Scalar>& g, const CArray<Scalar>& s, Sign sign)
{
    CArray<Scalar> out = s;
    for (Index m = 0; m < g.n; ++m)
        if (!keeps(sign, g.wavenumber(m)))
            out(m) = Complex<Scalar>(0);
    return out;
}

// Same projection along eta for every xi row of a full-Fourier field.
template <typename Scalar>
CField<Scalar> szego_project_y(const Grid1D<Scalar>& gy, const CField<Scalar>& v, Sign sign)
{
    CField<Scalar> out = v;
    for (Index m = 0; m < gy.n; ++m)
        if (!keeps(sign, gy.wavenumber(m)))
            out.col(m).setZero();
    return out;
}

template <typename Scalar>
Spectrum2D<Scalar> szego_project(const Spectrum2D<Scalar>& s, Sign sign)
{
    Spectrum2D<Scalar> f = to_representation(s, Representation::Fourier);
    f.values = szego_project_y(f.grid.gy, f.values, sign);
    return to_representation(f, s.rep);
}

// Littlewood-Paley block: multiply bin eta by phi(eta / 2^k).
template <typename Scalar>
CArray<Scalar> lp_block(const Grid1D<Scalar>& g, const CArray<Scalar>& s, int k)
{
    using std::ldexp;
    CArray<Scalar> out(g.n);
    for (Index m = 0; m < g.n; ++m)
        out(m) = lp_phi(ldexp(g.xi(m), -k)) * s(m);
    return out;
}

// Integers k for which phi(eta / 2^k) is nonzero on some grid bin.
template <typename Scalar>
std::pair<int, int> lp_range(const Grid1D<Scalar>& g)
{
    using std::ceil;
    using std::floor;
    using std::log2;
    const int lo = static_cast<int>(floor(log2(g.dxi()))) - 1;
    const int hi = static_cast<int>(ceil(log2(g.band()))) + 1;
    return {lo, hi};
}

enum class QMode { AtMost, Annulus };

// Q_{<= A} multiplies xi by psi0(xi / A); Q_{= A} by psi0(xi / A) - psi0(2 xi / A).
template <typename Scalar>
Spectrum2D<Scalar> q_project(const Spectrum2D<Scalar>& s, Scalar A, QMode mode)
{
    if (!(A > Scalar(0)))
        throw std::invalid_argument("q_project cutoff must be positive");
    Spectrum2D<Scalar> f = s;
    if (f.rep == Representation::Physical)
        f = to_representation(f, Representation::XFourier);
    const auto& gx = f.grid.gx;
    for (Index i = 0; i < gx.n; ++i) {
        const Scalar r = gx.xi(i) / A;
        const Scalar w = mode == QMode::AtMost ? psi0(r) : psi0(r) - psi0(Scalar(2) * r);
        f.values.row(i) *= w;
    }
    return to_representation(f, s.rep);
}

} // namespace szlab

#endif
