#ifndef SZLAB_RESONANT_HPP
#define SZLAB_RESONANT_HPP

#include "szlab/szego.hpp"

#include <array>

namespace szlab {

// case_id 0 is the resonant bulk (all four signs equal); 1..14 follow the case table.
template <typename Scalar>
struct ResonanceCase {
    int case_id = 0;
    Scalar omega = Scalar(0);
    std::array<int, 4> signs{};
};

template <typename Scalar>
Scalar omega_direct(Scalar eta, Scalar eta1, Scalar eta2)
{
    using std::abs;
    return abs(eta) - abs(eta - eta1) + abs(eta2 - eta1) - abs(eta2);
}

namespace detail {

// Sign patterns of (eta, eta - eta1, eta2 - eta1, eta2), +1 meaning >= 0.
inline constexpr std::array<std::array<int, 4>, 15> case_table{{
    {+1, +1, +1, +1}, // bulk (the all-minus bulk is handled separately)
    {+1, -1, -1, -1},
    {-1, +1, +1, +1},
    {+1, -1, +1, +1},
    {-1, +1, -1, -1},
    {+1, +1, -1, +1},
    {-1, -1, +1, -1},
    {+1, +1, +1, -1},
    {-1, -1, -1, +1},
    {+1, +1, -1, -1},
    {-1, -1, +1, +1},
    {+1, -1, +1, -1},
    {-1, +1, -1, +1},
    {+1, -1, -1, +1},
    {-1, +1, +1, -1},
}};

template <typename Scalar>
Scalar omega_closed_form(int id, Scalar e, Scalar e1, Scalar e2)
{
    switch (id) {
    case 0: return Scalar(0);
    case 1: return 2 * e;
    case 2: return -2 * e;
    case 3: return 2 * e - 2 * e1;
    case 4: return 2 * e1 - 2 * e;
    case 5: return 2 * e1 - 2 * e2;
    case 6: return 2 * e2 - 2 * e1;
    case 7: return 2 * e2;
    case 8: return -2 * e2;
    case 9: return 2 * e1;
    case 10: return -2 * e1;
    case 11: return 2 * e - 2 * e1 + 2 * e2;
    case 12: return -2 * e + 2 * e1 - 2 * e2;
    case 13: return 2 * e - 2 * e2;
    case 14: return 2 * e2 - 2 * e;
    }
    throw std::logic_error("unknown resonance case");
}

} // namespace detail

// Exact zeros count as >= 0, matching the eta = 0 in Pi_+ convention.
template <typename Scalar>
ResonanceCase<Scalar> classify_resonance(Scalar eta, Scalar eta1, Scalar eta2)
{
    ResonanceCase<Scalar> r;
    const Scalar v[4] = {eta, eta - eta1, eta2 - eta1, eta2};
    for (int q = 0; q < 4; ++q)
        r.signs[q] = v[q] >= Scalar(0) ? 1 : -1;
    if (r.signs == std::array<int, 4>{-1, -1, -1, -1}) {
        r.case_id = 0;
    } else {
        r.case_id = -1;
        for (int id = 0; id < 15; ++id)
            if (detail::case_table[id] == r.signs)
                r.case_id = id;
    }
    r.omega = detail::omega_closed_form(r.case_id, eta, eta1, eta2);
    return r;
}

template <typename Scalar>
Scalar resonance_omega_table(int case_id, Scalar eta, Scalar eta1, Scalar eta2)
{
    return detail::omega_closed_form(case_id, eta, eta1, eta2);
}

// Fibers y -> G^(xi, y) for each x frequency xi, with resonant time tau.
template <typename Scalar>
struct ResonantState {
    Spectrum2D<Scalar> spectrum;
    Scalar tau = Scalar(0);
};

using ResonantStated = ResonantState<double>;

template <typename Scalar>
ResonantState<Scalar> make_resonant_state(Spectrum2D<Scalar> s, Scalar tau = Scalar(0))
{
    return {to_representation(std::move(s), Representation::XFourier), tau};
}

// -i [Pi_+(|G_+|^2 G_+) + Pi_-(|G_-|^2 G_-)] for one fiber in eta coefficients.
template <typename Scalar>
CArray<Scalar> fiber_tendency(const Grid1D<Scalar>& gy, const CArray<Scalar>& c)
{
    if ((c == Complex<Scalar>(0)).all())
        return CArray<Scalar>::Zero(gy.n);
    const CArray<Scalar> p = szego_project(gy, c, Sign::Plus);
    const CArray<Scalar> m = c - p;
    CArray<Scalar> out = CArray<Scalar>::Zero(gy.n);
    if (!(p == Complex<Scalar>(0)).all())
        out += sector_tendency(gy, p, Sign::Plus);
    if (!(m == Complex<Scalar>(0)).all())
        out += sector_tendency(gy, m, Sign::Minus);
    return out;
}

// Full-Fourier tendency of the resonant system, fiber by fiber.
template <typename Scalar>
CField<Scalar> resonant_tendency(const Grid2D<Scalar>& g, const CField<Scalar>& fourier)
{
    CField<Scalar> out(fourier.rows(), fourier.cols());
    parallel_for(fourier.rows(), [&](Index i) {
        CArray<Scalar> row = fourier.row(i).transpose();
        out.row(i) = fiber_tendency(g.gy, row).transpose();
    });
    return out;
}

template <typename Scalar>
Spectrum2D<Scalar> resonant_rhs(const ResonantState<Scalar>& G)
{
    Spectrum2D<Scalar> f = to_representation(G.spectrum, Representation::Fourier);
    f.values = resonant_tendency(f.grid, f.values);
    return to_representation(f, Representation::XFourier);
}

// R[F, G, H] in the full-Fourier representation: Pi_+(F_+ conj(G_+) H_+) + Pi_-(...), fiberwise.
template <typename Scalar>
CField<Scalar> resonant_trilinear(const Grid2D<Scalar>& g, const CField<Scalar>& F, const CField<Scalar>& G,
                                  const CField<Scalar>& H)
{
    CField<Scalar> out(F.rows(), F.cols());
    const auto& gy = g.gy;
    parallel_for(F.rows(), [&](Index i) {
        CArray<Scalar> f = F.row(i).transpose(), gg = G.row(i).transpose(), h = H.row(i).transpose();
        CArray<Scalar> acc = CArray<Scalar>::Zero(gy.n);
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            const CArray<Scalar> fs = szego_project(gy, f, s), gs = szego_project(gy, gg, s),
                                 hs = szego_project(gy, h, s);
            if ((fs == Complex<Scalar>(0)).all() || (gs == Complex<Scalar>(0)).all() || (hs == Complex<Scalar>(0)).all())
                continue;
            acc += szego_project(gy, cubic_product(gy, fs, gs, hs), s);
        }
        out.row(i) = acc.transpose();
    });
    return out;
}

// Oracle: sum over (eta1, eta2) bin pairs classified resonant-zero, weight d_eta^2.
template <typename Scalar>
Spectrum2D<Scalar> resonant_rhs_direct(const ResonantState<Scalar>& G)
{
    const Spectrum2D<Scalar> f = to_representation(G.spectrum, Representation::Fourier);
    const auto& gy = f.grid.gy;
    const Index n = gy.n;
    if (n > 64)
        throw std::invalid_argument("resonant_rhs_direct is limited to 64 eta bins");
    const Scalar w = gy.dxi() * gy.dxi();
    Spectrum2D<Scalar> out = Spectrum2D<Scalar>::zeros(f.grid, Representation::Fourier);
    const Index h = n / 2;
    auto coeff = [&](Index i, Index k) {
        // wavenumber k -> value, zero outside the stored band
        return (k < -h || k >= h) ? Complex<Scalar>(0) : f.values(i, k + h);
    };
    for (Index i = 0; i < f.grid.nx(); ++i) {
        for (Index ko = -h + 1; ko < h; ++ko) {
            Complex<Scalar> s(0);
            for (Index k1 = -2 * h; k1 <= 2 * h; ++k1)
                for (Index k2 = -h; k2 < h; ++k2) {
                    const auto rc = classify_resonance<Scalar>(Scalar(ko), Scalar(k1), Scalar(k2));
                    if (rc.case_id != 0)
                        continue;
                    const Complex<Scalar> a = coeff(i, ko - k1), b = coeff(i, k2 - k1), c = coeff(i, k2);
                    if (a == Complex<Scalar>(0) || b == Complex<Scalar>(0) || c == Complex<Scalar>(0))
                        continue;
                    s += a * std::conj(b) * c;
                }
            out.values(i, ko + h) = Complex<Scalar>(0, -1) * w * s;
        }
    }
    return to_representation(out, Representation::XFourier);
}

// RK4 per fiber on the tau clock. Fibers never couple; zero fibers stay zero.
template <typename Scalar>
ResonantState<Scalar> evolve_resonant(const ResonantState<Scalar>& G0, Scalar tau_end,
                                      Scalar dtau = Scalar(default_szego_dt),
                                      const std::function<void(const ResonantState<Scalar>&)>& observer = {},
                                      Index every = 1)
{
    Spectrum2D<Scalar> f = to_representation(G0.spectrum, Representation::Fourier);
    const auto& gy = f.grid.gy;
    const Index steps = step_count(double(tau_end - G0.tau), double(dtau));
    const Scalar h = steps ? (tau_end - G0.tau) / Scalar(steps) : Scalar(0);
    const Index nx = f.grid.nx();
    std::vector<CArray<Scalar>> fibers(nx);
    std::vector<Scalar> m0(nx);
    std::vector<char> active(nx);
    for (Index i = 0; i < nx; ++i) {
        fibers[i] = f.values.row(i).transpose();
        m0[i] = fibers[i].abs2().sum();
        active[i] = m0[i] > Scalar(0);
    }
    auto emit = [&](Scalar tau) {
        Spectrum2D<Scalar> s = f;
        for (Index i = 0; i < nx; ++i)
            s.values.row(i) = fibers[i].transpose();
        return ResonantState<Scalar>{to_representation(s, Representation::XFourier), tau};
    };
    if (observer)
        observer(emit(G0.tau));
    for (Index s = 1; s <= steps; ++s) {
        const Scalar tau = G0.tau + Scalar(s) * h;
        parallel_for(nx, [&](Index i) {
            if (!active[i])
                return;
            rk4_step(fibers[i], h, [&](const CArray<Scalar>& c) { return fiber_tendency(gy, c); });
            check_mass(fibers[i], m0[i], tau);
        });
        if (observer && (s % every == 0 || s == steps))
            observer(emit(tau));
    }
    return emit(tau_end);
}

// Uniformly sampled 1-D Szego trajectory u(t0 + k dt).
template <typename Scalar>
struct SzegoTrajectory {
    Grid1D<Scalar> grid;
    Scalar t0 = Scalar(0);
    Scalar dt = Scalar(0);
    std::vector<CArray<Scalar>> samples;

    Scalar t_end() const { return t0 + dt * Scalar(samples.size() - 1); }

    // Four-point Lagrange (cubic) interpolation in time.
    CArray<Scalar> at(Scalar t) const
    {
        using std::floor;
        const Index n = static_cast<Index>(samples.size());
        const Scalar tol = dt * Scalar(1e-9);
        if (n == 0 || t < t0 - tol || t > t_end() + tol)
            throw std::out_of_range("interpolation time " + std::to_string(double(t)) +
                                    " outside the sampled trajectory range");
        if (n == 1)
            return samples[0];
        const Scalar s = (t - t0) / dt;
        Index k = static_cast<Index>(floor(s));
        if (std::abs(s - std::round(s)) < Scalar(1e-12)) {
            const Index r = std::clamp<Index>(static_cast<Index>(std::llround(double(s))), 0, n - 1);
            return samples[r];
        }
        if (n < 4) {
            k = std::clamp<Index>(k, 0, n - 2);
            const Scalar a = s - Scalar(k);
            return (Scalar(1) - a) * samples[k] + a * samples[k + 1];
        }
        const Index b = std::clamp<Index>(k - 1, 0, n - 4);
        CArray<Scalar> out = CArray<Scalar>::Zero(samples[0].size());
        for (Index q = 0; q < 4; ++q) {
            Scalar w(1);
            for (Index r = 0; r < 4; ++r)
                if (r != q)
                    w *= (s - Scalar(b + r)) / Scalar(q - r);
            out += w * samples[b + q];
        }
        return out;
    }
};

template <typename Scalar>
SzegoTrajectory<Scalar> sample_szego(const SzegoState<Scalar>& u0, Scalar t_end, Scalar dt_sample,
                                     Scalar dt = Scalar(default_szego_dt))
{
    SzegoTrajectory<Scalar> tr;
    tr.grid = u0.grid;
    tr.t0 = u0.t;
    const Index n = step_count(double(t_end - u0.t), double(dt_sample));
    tr.dt = n ? (t_end - u0.t) / Scalar(n) : Scalar(0);
    const Index sub = std::max<Index>(1, static_cast<Index>(std::ceil(double(tr.dt / dt) - 1e-9)));
    SzegoState<Scalar> u = u0;
    tr.samples.push_back(u.coeffs);
    for (Index k = 1; k <= n; ++k) {
        u = evolve_szego(u, u0.t + Scalar(k) * tr.dt, tr.dt / Scalar(sub));
        tr.samples.push_back(u.coeffs);
    }
    return tr;
}

// Fiber xi holds rho psi(xi) u(rho^2 psi(xi)^2 tau).
template <typename Scalar>
ResonantState<Scalar> scaled_solution(const SzegoTrajectory<Scalar>& traj, Scalar rho,
                                      const std::function<Scalar(Scalar)>& psi, const Grid1D<Scalar>& gx, Scalar tau)
{
    if (!(rho > Scalar(0)))
        throw std::invalid_argument("rho must be positive");
    Spectrum2D<Scalar> s = Spectrum2D<Scalar>::zeros({gx, traj.grid}, Representation::Fourier);
    for (Index i = 0; i < gx.n; ++i) {
        const Scalar p = psi(gx.xi(i));
        if (p == Scalar(0))
            continue;
        s.values.row(i) = (rho * p * traj.at(traj.t0 + rho * rho * p * p * tau)).transpose();
    }
    return {to_representation(s, Representation::XFourier), tau};
}

template <typename Scalar>
RArray<Scalar> fiber_gnorm_profile(const ResonantState<Scalar>& G)
{
    return fiber_g_norms(G.spectrum);
}

// The minus sector eta < 0 as a Hardy-space vector: eta -> -eta - d_eta. The strictly negative
// Szego flow becomes the ordinary one under this map, Nyquist bin included.
template <typename Scalar>
CArray<Scalar> minus_to_hardy(const Grid1D<Scalar>& gy, const CArray<Scalar>& c)
{
    CArray<Scalar> v = CArray<Scalar>::Zero(gy.n);
    for (Index m = 0; m < gy.zero_bin(); ++m)
        v(gy.n - 1 - m) = c(m);
    return v;
}

template <typename Scalar>
CArray<Scalar> hardy_to_minus(const Grid1D<Scalar>& gy, const CArray<Scalar>& v)
{
    CArray<Scalar> c = CArray<Scalar>::Zero(gy.n);
    for (Index m = 0; m < gy.zero_bin(); ++m)
        c(m) = v(gy.n - 1 - m);
    return c;
}

// Hankel trace norm of each fiber, summed over both sectors.
template <typename Scalar>
RArray<Scalar> fiber_trace_norms(const ResonantState<Scalar>& G, Index n = -1)
{
    const Spectrum2D<Scalar> f = to_representation(G.spectrum, Representation::Fourier);
    const auto& gy = f.grid.gy;
    RArray<Scalar> out(f.grid.nx());
    parallel_for(f.grid.nx(), [&](Index i) {
        CArray<Scalar> c = f.values.row(i).transpose();
        const CArray<Scalar> p = szego_project(gy, c, Sign::Plus);
        const CArray<Scalar> r = minus_to_hardy(gy, c);
        Scalar s(0);
        if (!(p == Complex<Scalar>(0)).all())
            s += peller_trace_norm(hankel_matrix(SzegoState<Scalar>{gy, p, Scalar(0)}, n));
        if (!(r == Complex<Scalar>(0)).all())
            s += peller_trace_norm(hankel_matrix(SzegoState<Scalar>{gy, r, Scalar(0)}, n));
        out(i) = s;
    });
    return out;
}

} // namespace szlab

#endif
