#ifndef SZLAB_NORMS_HPP
#define SZLAB_NORMS_HPP

#include "szlab/projectors.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace szlab {

struct NormParams {
    int N = 3;
    double delta = 5e-5;

    void validate() const
    {
        if (N < 3)
            throw std::invalid_argument("Sobolev order N must be >= 3");
        if (!(delta > 0.0 && delta < 1e-4))
            throw std::invalid_argument("delta must lie in (0, 1e-4)");
    }
};

template <typename Scalar>
Scalar l2_norm(const Grid1D<Scalar>& g, const CArray<Scalar>& physical)
{
    using std::sqrt;
    return sqrt(physical.abs2().sum() * g.dx());
}

template <typename Scalar>
Scalar l1_norm(const Grid1D<Scalar>& g, const CArray<Scalar>& physical)
{
    Scalar s(0);
    for (Index j = 0; j < physical.size(); ++j)
        s += std::abs(physical(j));
    return s * g.dx();
}

template <typename Scalar>
struct BesovResult {
    Scalar value = Scalar(0);
    // Part of `value` from blocks reaching past the grid band.
    Scalar tail = Scalar(0);
};

// sum_k 2^k || Delta_k f ||_{L^1(box)} over every block with grid support.
template <typename Scalar>
BesovResult<Scalar> besov_from_coeffs(const Grid1D<Scalar>& g, const CArray<Scalar>& coeffs)
{
    using std::ldexp;
    BesovResult<Scalar> r;
    const auto [lo, hi] = lp_range(g);
    for (int k = lo; k <= hi; ++k) {
        CArray<Scalar> block = lp_block(g, coeffs, k);
        if ((block == Complex<Scalar>(0)).all())
            continue;
        const Scalar term = ldexp(l1_norm(g, inverse(g, block)), k);
        r.value += term;
        if (ldexp(Scalar(1), k + 1) > g.band())
            r.tail += term;
    }
    return r;
}

template <typename Scalar>
BesovResult<Scalar> besov(const Field1D<Scalar>& f)
{
    return besov_from_coeffs(f.grid, forward(f.grid, f.values));
}

template <typename Scalar>
Scalar besov_seminorm(const Field1D<Scalar>& f)
{
    return besov(f).value;
}

template <typename Scalar>
Scalar g_norm(const Field1D<Scalar>& f)
{
    return l2_norm(f.grid, f.values) + besov_seminorm(f);
}

template <typename Scalar>
Scalar g_norm_from_coeffs(const Grid1D<Scalar>& g, const CArray<Scalar>& coeffs)
{
    return l2_norm(g, inverse(g, coeffs)) + besov_from_coeffs(g, coeffs).value;
}

// g_norm of every xi fiber y -> F^(xi, y).
template <typename Scalar>
RArray<Scalar> fiber_g_norms(const Spectrum2D<Scalar>& F)
{
    const Spectrum2D<Scalar> f = to_representation(F, Representation::Fourier);
    RArray<Scalar> out(f.grid.nx());
    parallel_for(f.grid.nx(), [&](Index i) {
        CArray<Scalar> row = f.values.row(i).transpose();
        out(i) = (row == Complex<Scalar>(0)).all() ? Scalar(0) : g_norm_from_coeffs(f.grid.gy, row);
    });
    return out;
}

template <typename Scalar>
Scalar z_norm(const Spectrum2D<Scalar>& F)
{
    return fiber_g_norms(F).maxCoeff();
}

// (sum w(xi, eta) |F^|^2 (2 pi)^2 dxi deta)^(1/2).
template <typename Scalar, typename Weight>
Scalar weighted_l2(const Spectrum2D<Scalar>& F, Weight w)
{
    using std::sqrt;
    const Spectrum2D<Scalar> f = to_representation(F, Representation::Fourier);
    const auto& gx = f.grid.gx;
    const auto& gy = f.grid.gy;
    Scalar s(0);
    for (Index i = 0; i < gx.n; ++i)
        for (Index j = 0; j < gy.n; ++j)
            s += w(gx.xi(i), gy.xi(j)) * std::norm(f.values(i, j));
    const Scalar c = Scalar(4) * pi_v<Scalar> * pi_v<Scalar> * gx.dxi() * gy.dxi();
    return sqrt(s * c);
}

// || U ||_{L^2_x H^s_y}.
template <typename Scalar>
Scalar mixed_sobolev(const Spectrum2D<Scalar>& U, Scalar s)
{
    using std::pow;
    if (s < Scalar(0))
        throw std::invalid_argument("mixed_sobolev order must be >= 0");
    return weighted_l2(U, [s](Scalar, Scalar eta) { return pow(Scalar(1) + eta * eta, s); });
}

template <typename Scalar>
Scalar hn_norm(const Spectrum2D<Scalar>& F, int N)
{
    using std::pow;
    return weighted_l2(F, [N](Scalar xi, Scalar eta) { return pow(Scalar(1) + xi * xi + eta * eta, N); });
}

template <typename Scalar>
Scalar l2_norm(const Spectrum2D<Scalar>& F)
{
    return weighted_l2(F, [](Scalar, Scalar) { return Scalar(1); });
}

// x^p F, formed in physical space.
template <typename Scalar>
Spectrum2D<Scalar> x_weight(const Spectrum2D<Scalar>& F, int p = 1)
{
    Spectrum2D<Scalar> f = to_representation(F, Representation::Physical);
    for (Index i = 0; i < f.grid.nx(); ++i) {
        Scalar w(1);
        for (int q = 0; q < p; ++q)
            w *= f.grid.gx.x(i);
        f.values.row(i) *= w;
    }
    return to_representation(f, F.rep);
}

// (1 + |D_x|) F via the multiplier 1 + |xi|.
template <typename Scalar>
Spectrum2D<Scalar> one_plus_dx(const Spectrum2D<Scalar>& F)
{
    using std::abs;
    Spectrum2D<Scalar> f = F.rep == Representation::Physical ? to_representation(F, Representation::XFourier) : F;
    for (Index i = 0; i < f.grid.nx(); ++i)
        f.values.row(i) *= Scalar(1) + abs(f.grid.gx.xi(i));
    return to_representation(f, F.rep);
}

template <typename Scalar>
Scalar s_prime_norm(const Spectrum2D<Scalar>& F, const NormParams& p = {})
{
    return hn_norm(F, p.N) + l2_norm(x_weight(F));
}

template <typename Scalar>
Scalar s_norm(const Spectrum2D<Scalar>& F, const NormParams& p = {})
{
    return hn_norm(F, p.N) + mixed_sobolev(x_weight(F), Scalar(2));
}

template <typename Scalar>
Scalar y_norm(const Spectrum2D<Scalar>& F, const NormParams& p = {})
{
    return s_norm(F, p) + z_norm(F);
}

template <typename Scalar>
Scalar s_plus_norm(const Spectrum2D<Scalar>& F, const NormParams& p = {})
{
    const Spectrum2D<Scalar> xF = x_weight(F);
    return s_norm(F, p) + mixed_sobolev(xF, Scalar(3)) + s_norm(one_plus_dx(F), p) + s_norm(xF, p);
}

template <typename Scalar>
Scalar y_plus_norm(const Spectrum2D<Scalar>& F, const NormParams& p = {})
{
    return s_plus_norm(F, p) + z_norm(F) + z_norm(one_plus_dx(F)) + z_norm(x_weight(F)) + z_norm(x_weight(F, 2));
}

// sup_i { |F|_Z + (1+t)^-delta |F|_Y + (1+t)^(1-3 delta) |dF/dt|_Y } over samples with t_i <= T.
// Time derivatives: centered differences inside, second-order one-sided at the ends.
template <typename Scalar>
Scalar xt_diagnostic(const std::vector<Scalar>& times, const std::vector<Spectrum2D<Scalar>>& traj, Scalar T,
                     const NormParams& p = {})
{
    using std::pow;
    const std::size_t n = traj.size();
    if (n < 3 || times.size() != n)
        throw std::invalid_argument("xt_diagnostic needs at least 3 samples with matching times");
    std::vector<Spectrum2D<Scalar>> f;
    for (const auto& s : traj)
        f.push_back(to_representation(s, Representation::Fourier));
    auto deriv = [&](std::size_t i) {
        Spectrum2D<Scalar> d = f[i];
        if (i == 0) {
            const Scalar h1 = times[1] - times[0], h2 = times[2] - times[1];
            d.values = -(Scalar(2) * h1 + h2) / (h1 * (h1 + h2)) * f[0].values + (h1 + h2) / (h1 * h2) * f[1].values -
                       h1 / (h2 * (h1 + h2)) * f[2].values;
        } else if (i == n - 1) {
            const Scalar h1 = times[n - 2] - times[n - 3], h2 = times[n - 1] - times[n - 2];
            d.values = h2 / (h1 * (h1 + h2)) * f[n - 3].values - (h1 + h2) / (h1 * h2) * f[n - 2].values +
                       (h1 + Scalar(2) * h2) / (h2 * (h1 + h2)) * f[n - 1].values;
        } else {
            const Scalar h1 = times[i] - times[i - 1], h2 = times[i + 1] - times[i];
            d.values = -h2 / (h1 * (h1 + h2)) * f[i - 1].values + (h2 - h1) / (h1 * h2) * f[i].values +
                       h1 / (h2 * (h1 + h2)) * f[i + 1].values;
        }
        return d;
    };
    Scalar best(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (times[i] > T)
            continue;
        const Scalar t = times[i];
        const Scalar v = z_norm(f[i]) + pow(Scalar(1) + t, -Scalar(p.delta)) * y_norm(f[i], p) +
                         pow(Scalar(1) + t, Scalar(1) - Scalar(3 * p.delta)) * y_norm(deriv(i), p);
        best = std::max(best, v);
    }
    return best;
}

struct NormReport {
    double t = 0.0;
    std::string grid;
    std::vector<std::pair<std::string, double>> values;

    void add(const std::string& name, double v)
    {
        if (!std::isfinite(v) || v < 0.0)
            throw NumericalError("norm '" + name + "' is not finite and nonnegative");
        values.emplace_back(name, v);
    }
};

inline void write_norm_csv_header(std::ostream& os) { os << "t,norm_name,value\n"; }

inline void write_norm_csv(std::ostream& os, const NormReport& r)
{
    const auto old = os.precision(17);
    for (const auto& [name, v] : r.values)
        os << r.t << ',' << name << ',' << v << '\n';
    os.precision(old);
}

} // namespace szlab

#endif
