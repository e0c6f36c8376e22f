#ifndef SZLAB_FFT_HPP
#define SZLAB_FFT_HPP

#include "szlab/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdint>

namespace szlab {

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine()
{
    // kissfft caches twiddles in a map, so each thread keeps its own engine.
    thread_local Eigen::FFT<Scalar> engine = [] {
        Eigen::FFT<Scalar> f;
        f.SetFlag(Eigen::FFT<Scalar>::Unscaled);
        return f;
    }();
    return engine;
}

template <typename Scalar>
struct Scratch {
    std::vector<Complex<Scalar>> a, b;
    void ensure(Index n)
    {
        if (Index(a.size()) < n) {
            a.resize(n);
            b.resize(n);
        }
    }
};

template <typename Scalar>
Scratch<Scalar>& scratch()
{
    thread_local Scratch<Scalar> s;
    return s;
}

// Physical samples -> centered coefficients with the 1/(2 pi) convention:
// c_m = (dx / 2 pi) (-1)^k sum_j f_j exp(-2 pi i k j / n),  k = m - n/2.
template <typename Scalar>
void forward_strided(const Grid1D<Scalar>& g, const Complex<Scalar>* in, Index istride,
                     Complex<Scalar>* out, Index ostride)
{
    const Index n = g.n;
    auto& s = scratch<Scalar>();
    s.ensure(n);
    for (Index j = 0; j < n; ++j)
        s.a[j] = in[j * istride];
    fft_engine<Scalar>().fwd(s.b.data(), s.a.data(), n);
    const Scalar w = g.dx() / (Scalar(2) * pi_v<Scalar>);
    for (Index m = 0; m < n; ++m) {
        const Index k = m - n / 2;
        const Index idx = k < 0 ? k + n : k;
        const Scalar sgn = (k & 1) ? Scalar(-1) : Scalar(1);
        out[m * ostride] = (w * sgn) * s.b[idx];
    }
}

// Centered coefficients -> physical samples: f_j = d_xi sum_m c_m exp(i xi_m x_j).
template <typename Scalar>
void inverse_strided(const Grid1D<Scalar>& g, const Complex<Scalar>* in, Index istride,
                     Complex<Scalar>* out, Index ostride)
{
    const Index n = g.n;
    auto& s = scratch<Scalar>();
    s.ensure(n);
    for (Index m = 0; m < n; ++m) {
        const Index k = m - n / 2;
        const Index idx = k < 0 ? k + n : k;
        const Scalar sgn = (k & 1) ? Scalar(-1) : Scalar(1);
        s.a[idx] = sgn * in[m * istride];
    }
    fft_engine<Scalar>().inv(s.b.data(), s.a.data(), n);
    const Scalar w = g.dxi();
    for (Index j = 0; j < n; ++j)
        out[j * ostride] = w * s.b[j];
}

} // namespace detail

template <typename Scalar>
CArray<Scalar> forward(const Grid1D<Scalar>& g, const CArray<Scalar>& f)
{
    if (f.size() != g.n)
        throw std::invalid_argument("field length does not match grid");
    CArray<Scalar> c(g.n);
    detail::forward_strided(g, f.data(), 1, c.data(), 1);
    return c;
}

template <typename Scalar>
CArray<Scalar> inverse(const Grid1D<Scalar>& g, const CArray<Scalar>& c)
{
    if (c.size() != g.n)
        throw std::invalid_argument("coefficient length does not match grid");
    CArray<Scalar> f(g.n);
    detail::inverse_strided(g, c.data(), 1, f.data(), 1);
    return f;
}

template <typename Scalar>
CArray<Scalar> transform_forward(const Field1D<Scalar>& f)
{
    return forward(f.grid, f.values);
}

template <typename Scalar>
Field1D<Scalar> transform_inverse(const Grid1D<Scalar>& g, const CArray<Scalar>& c)
{
    return {g, inverse(g, c)};
}

// Same half-width, `factor` times the points: identical frequency step, wider band.
template <typename Scalar>
Grid1D<Scalar> padded_grid(const Grid1D<Scalar>& g, Index factor = 2)
{
    Grid1D<Scalar> p = g;
    p.n = g.n * factor;
    return p;
}

template <typename Scalar>
CArray<Scalar> pad(const CArray<Scalar>& c, Index n2)
{
    const Index n = c.size();
    CArray<Scalar> out = CArray<Scalar>::Zero(n2);
    out.segment(n2 / 2 - n / 2, n) = c;
    return out;
}

// Crop to the central n bins and clear the Nyquist bin.
template <typename Scalar>
CArray<Scalar> truncate(const CArray<Scalar>& c, Index n)
{
    CArray<Scalar> out = c.segment(c.size() / 2 - n / 2, n);
    out(0) = Complex<Scalar>(0);
    return out;
}

// Fourier coefficients of a * conj(b) * c, dealiased by zero padding to 2n.
// The retained band is alias free, so this is the linear convolution.
template <typename Scalar>
CArray<Scalar> cubic_product(const Grid1D<Scalar>& g, const CArray<Scalar>& a, const CArray<Scalar>& b,
                             const CArray<Scalar>& c)
{
    const Grid1D<Scalar> p = padded_grid(g);
    CArray<Scalar> pa = inverse(p, pad(a, p.n));
    CArray<Scalar> pb = (&b == &a) ? pa : inverse(p, pad(b, p.n));
    CArray<Scalar> pc = (&c == &a) ? pa : inverse(p, pad(c, p.n));
    CArray<Scalar> prod = pa * pb.conjugate() * pc;
    return truncate(forward(p, prod), g.n);
}

enum class Representation : std::uint32_t { Physical = 0, XFourier = 1, Fourier = 2 };

inline const char* to_string(Representation r)
{
    switch (r) {
    case Representation::Physical: return "physical";
    case Representation::XFourier: return "x-fourier";
    case Representation::Fourier: return "full-fourier";
    }
    return "unknown";
}

template <typename Scalar>
struct Spectrum2D {
    Grid2D<Scalar> grid;
    CField<Scalar> values;
    Representation rep = Representation::Fourier;

    static Spectrum2D zeros(const Grid2D<Scalar>& g, Representation r)
    {
        return {g, CField<Scalar>::Zero(g.nx(), g.ny()), r};
    }
};

using Spectrum2Dd = Spectrum2D<double>;

// Transform along the x axis (rows index x or xi), column by column.
template <typename Scalar>
void transform_x(const Grid1D<Scalar>& gx, CField<Scalar>& v, bool fwd)
{
    const Index ny = v.cols();
    Complex<Scalar>* data = v.data();
    parallel_for(ny, [&](Index j) {
        if (fwd)
            detail::forward_strided(gx, data + j, ny, data + j, ny);
        else
            detail::inverse_strided(gx, data + j, ny, data + j, ny);
    });
}

template <typename Scalar>
void transform_y(const Grid1D<Scalar>& gy, CField<Scalar>& v, bool fwd)
{
    const Index ny = v.cols();
    Complex<Scalar>* data = v.data();
    parallel_for(v.rows(), [&](Index i) {
        if (fwd)
            detail::forward_strided(gy, data + i * ny, 1, data + i * ny, 1);
        else
            detail::inverse_strided(gy, data + i * ny, 1, data + i * ny, 1);
    });
}

template <typename Scalar>
Spectrum2D<Scalar> to_representation(Spectrum2D<Scalar> s, Representation target)
{
    auto level = [](Representation r) { return static_cast<int>(r); };
    if (s.values.rows() != s.grid.nx() || s.values.cols() != s.grid.ny())
        throw std::invalid_argument("spectrum shape does not match grid");
    while (level(s.rep) < level(target)) {
        if (s.rep == Representation::Physical) {
            transform_x(s.grid.gx, s.values, true);
            s.rep = Representation::XFourier;
        } else {
            transform_y(s.grid.gy, s.values, true);
            s.rep = Representation::Fourier;
        }
    }
    while (level(s.rep) > level(target)) {
        if (s.rep == Representation::Fourier) {
            transform_y(s.grid.gy, s.values, false);
            s.rep = Representation::XFourier;
        } else {
            transform_x(s.grid.gx, s.values, false);
            s.rep = Representation::Physical;
        }
    }
    return s;
}

template <typename Scalar>
CField<Scalar> pad2(const CField<Scalar>& c, Index nx2, Index ny2)
{
    CField<Scalar> out = CField<Scalar>::Zero(nx2, ny2);
    out.block(nx2 / 2 - c.rows() / 2, ny2 / 2 - c.cols() / 2, c.rows(), c.cols()) = c;
    return out;
}

template <typename Scalar>
CField<Scalar> truncate2(const CField<Scalar>& c, Index nx, Index ny)
{
    CField<Scalar> out = c.block(c.rows() / 2 - nx / 2, c.cols() / 2 - ny / 2, nx, ny);
    out.row(0).setZero();
    out.col(0).setZero();
    return out;
}

template <typename Scalar>
Grid2D<Scalar> padded_grid(const Grid2D<Scalar>& g)
{
    return {padded_grid(g.gx), padded_grid(g.gy)};
}

// Full-Fourier values -> physical samples on the 2x padded grid.
template <typename Scalar>
CField<Scalar> padded_physical(const Grid2D<Scalar>& g, const CField<Scalar>& fourier)
{
    const Grid2D<Scalar> p = padded_grid(g);
    CField<Scalar> v = pad2(fourier, p.nx(), p.ny());
    transform_y(p.gy, v, false);
    transform_x(p.gx, v, false);
    return v;
}

// Physical samples on the padded grid -> full-Fourier values on g, Nyquist cleared.
template <typename Scalar>
CField<Scalar> from_padded_physical(const Grid2D<Scalar>& g, CField<Scalar> phys)
{
    const Grid2D<Scalar> p = padded_grid(g);
    transform_x(p.gx, phys, true);
    transform_y(p.gy, phys, true);
    return truncate2(phys, g.nx(), g.ny());
}

template <typename Scalar>
CField<Scalar> cubic_product2(const Grid2D<Scalar>& g, const CField<Scalar>& a, const CField<Scalar>& b,
                              const CField<Scalar>& c)
{
    CField<Scalar> pa = padded_physical(g, a);
    CField<Scalar> pb = (&b == &a) ? pa : padded_physical(g, b);
    CField<Scalar> pc = (&c == &a) ? pa : (&c == &b ? pb : padded_physical(g, c));
    return from_padded_physical<Scalar>(g, pa * pb.conjugate() * pc);
}

template <typename Scalar>
void zero_nyquist(CArray<Scalar>& c)
{
    c(0) = Complex<Scalar>(0);
}

} // namespace szlab

#endif
