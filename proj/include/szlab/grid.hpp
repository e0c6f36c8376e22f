#ifndef SZLAB_GRID_HPP
#define SZLAB_GRID_HPP

#include "szlab/core.hpp"

namespace szlab {

// Periodic box [-L, L) with n samples. Frequencies are stored centered:
// index m carries xi = (m - n/2) * dxi, so m = 0 is the Nyquist bin and
// m = n/2 is the zero bin.
template <typename Scalar>
struct Grid1D {
    Scalar L = Scalar(1);
    Index n = 8;

    Scalar dx() const { return Scalar(2) * L / Scalar(n); }
    Scalar dxi() const { return pi_v<Scalar> / L; }
    Scalar band() const { return pi_v<Scalar> * Scalar(n) / (Scalar(2) * L); }
    Index zero_bin() const { return n / 2; }
    Index wavenumber(Index m) const { return m - n / 2; }
    Scalar x(Index j) const { return -L + Scalar(j) * dx(); }
    Scalar xi(Index m) const { return Scalar(m - n / 2) * dxi(); }

    RArray<Scalar> xs() const
    {
        RArray<Scalar> r(n);
        for (Index j = 0; j < n; ++j)
            r(j) = x(j);
        return r;
    }

    RArray<Scalar> xis() const
    {
        RArray<Scalar> r(n);
        for (Index m = 0; m < n; ++m)
            r(m) = xi(m);
        return r;
    }

    bool operator==(const Grid1D& o) const { return L == o.L && n == o.n; }
};

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

template <typename Scalar>
Grid1D<Scalar> make_grid(Scalar L, Index n)
{
    if (!(L > Scalar(0)))
        throw std::invalid_argument("grid half-width must be positive");
    if (n < 8 || !is_power_of_two(n))
        throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
    Grid1D<Scalar> g;
    g.L = L;
    g.n = n;
    return g;
}

template <typename Scalar>
struct Grid2D {
    Grid1D<Scalar> gx;
    Grid1D<Scalar> gy;

    Index nx() const { return gx.n; }
    Index ny() const { return gy.n; }
    bool operator==(const Grid2D& o) const { return gx == o.gx && gy == o.gy; }
};

template <typename Scalar>
Grid2D<Scalar> make_grid2d(Scalar Lx, Index nx, Scalar Ly, Index ny)
{
    return {make_grid(Lx, nx), make_grid(Ly, ny)};
}

template <typename Scalar>
struct Field1D {
    Grid1D<Scalar> grid;
    CArray<Scalar> values;
};

using Grid1Dd = Grid1D<double>;
using Grid2Dd = Grid2D<double>;
using Field1Dd = Field1D<double>;

} // namespace szlab

#endif
