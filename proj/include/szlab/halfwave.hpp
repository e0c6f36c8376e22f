#ifndef SZLAB_HALFWAVE_HPP
#define SZLAB_HALFWAVE_HPP

#include "szlab/resonant.hpp"

namespace szlab {

template <typename Scalar>
struct HalfWaveState {
    Spectrum2D<Scalar> field;
    Scalar t = Scalar(0);
};

template <typename Scalar>
struct ProfileState {
    Spectrum2D<Scalar> field;
    Scalar t = Scalar(0);
};

using HalfWaveStated = HalfWaveState<double>;
using ProfileStated = ProfileState<double>;

// Symbol of A = d_x^2 - |D_y|.
template <typename Scalar>
Scalar symbol_A(Scalar xi, Scalar eta)
{
    using std::abs;
    return -xi * xi - abs(eta);
}

template <typename Scalar, typename Symbol>
CField<Scalar> apply_phase(const Grid2D<Scalar>& g, const CField<Scalar>& v, Scalar t, Symbol sym)
{
    CField<Scalar> out(v.rows(), v.cols());
    for (Index i = 0; i < g.nx(); ++i)
        for (Index j = 0; j < g.ny(); ++j)
            out(i, j) = std::polar(Scalar(1), t * sym(g.gx.xi(i), g.gy.xi(j))) * v(i, j);
    return out;
}

// exp(i t A) on full-Fourier values.
template <typename Scalar>
CField<Scalar> propagate(const Grid2D<Scalar>& g, const CField<Scalar>& v, Scalar t)
{
    return apply_phase(g, v, t, [](Scalar xi, Scalar eta) { return symbol_A(xi, eta); });
}

template <typename Scalar>
Spectrum2D<Scalar> linear_propagator(const Spectrum2D<Scalar>& W, Scalar t)
{
    if (W.rep != Representation::Fourier)
        throw std::invalid_argument("linear_propagator expects a full-Fourier spectrum");
    return {W.grid, propagate(W.grid, W.values, t), W.rep};
}

// exp(i t d_x^2) and exp(i s |D_y|) as separate factors.
template <typename Scalar>
CField<Scalar> propagate_x(const Grid2D<Scalar>& g, const CField<Scalar>& v, Scalar t)
{
    return apply_phase(g, v, t, [](Scalar xi, Scalar) { return -xi * xi; });
}

template <typename Scalar>
CField<Scalar> propagate_absdy(const Grid2D<Scalar>& g, const CField<Scalar>& v, Scalar s)
{
    using std::abs;
    return apply_phase(g, v, s, [](Scalar, Scalar eta) { return abs(eta); });
}

struct HalfWaveOptions {
    bool nonlinear = true;
    // +1 for |U|^2 U on the right-hand side of (i d_t + A) U = |U|^2 U, -1 for the other sign.
    double sign = 1.0;
};

// U -> U exp(-i sign |U|^2 h), evaluated on the padded grid and cropped back.
template <typename Scalar>
CField<Scalar> nonlinear_substep(const Grid2D<Scalar>& g, const CField<Scalar>& fourier, Scalar h, Scalar sign)
{
    CField<Scalar> phys = padded_physical(g, fourier);
    for (Index k = 0; k < phys.size(); ++k) {
        auto& u = phys.data()[k];
        u *= std::polar(Scalar(1), -sign * std::norm(u) * h);
    }
    return from_padded_physical(g, std::move(phys));
}

template <typename Scalar>
void check_finite(const CField<Scalar>& v, Scalar t)
{
    if (!v.allFinite())
        throw NumericalError("half-wave flow produced non-finite values at t = " + std::to_string(double(t)));
}

// Strang splitting: half nonlinear step, full linear step, half nonlinear step.
template <typename Scalar>
HalfWaveState<Scalar> evolve_halfwave(const HalfWaveState<Scalar>& U0, Scalar t1, Scalar dt,
                                      const HalfWaveOptions& opt = {},
                                      const std::function<void(const HalfWaveState<Scalar>&)>& observer = {},
                                      Index every = 1)
{
    const Grid2D<Scalar> g = U0.field.grid;
    CField<Scalar> v = to_representation(U0.field, Representation::Fourier).values;
    const Index steps = step_count(double(t1 - U0.t), double(dt));
    const Scalar h = steps ? (t1 - U0.t) / Scalar(steps) : Scalar(0);
    const Scalar sg(opt.sign);
    const CField<Scalar> phase = propagate(g, CField<Scalar>(CField<Scalar>::Ones(g.nx(), g.ny())), h);
    auto emit = [&](Scalar t) {
        return HalfWaveState<Scalar>{Spectrum2D<Scalar>{g, v, Representation::Fourier}, t};
    };
    if (observer)
        observer(emit(U0.t));
    for (Index s = 1; s <= steps; ++s) {
        if (opt.nonlinear)
            v = nonlinear_substep(g, v, h / 2, sg);
        v = phase * v;
        if (opt.nonlinear)
            v = nonlinear_substep(g, v, h / 2, sg);
        const Scalar t = U0.t + Scalar(s) * h;
        check_finite(v, t);
        if (observer && (s % every == 0 || s == steps))
            observer(emit(t));
    }
    return emit(t1);
}

template <typename Scalar>
ProfileState<Scalar> profile(const HalfWaveState<Scalar>& U)
{
    const Spectrum2D<Scalar> f = to_representation(U.field, Representation::Fourier);
    return {{f.grid, propagate(f.grid, f.values, -U.t), Representation::Fourier}, U.t};
}

template <typename Scalar>
HalfWaveState<Scalar> unprofile(const ProfileState<Scalar>& F)
{
    const Spectrum2D<Scalar> f = to_representation(F.field, Representation::Fourier);
    return {{f.grid, propagate(f.grid, f.values, F.t), Representation::Fourier}, F.t};
}

// I^t[f, g, h] = U(-t)(U(t)f conj(U(t)g) U(t)h), U(t) = exp(i t d_x^2), on full-Fourier values.
template <typename Scalar>
CField<Scalar> op_I(const Grid2D<Scalar>& g, const CField<Scalar>& f, const CField<Scalar>& gg, const CField<Scalar>& h,
                    Scalar t)
{
    const CField<Scalar> a = propagate_x(g, f, t);
    const CField<Scalar> b = (&gg == &f) ? a : propagate_x(g, gg, t);
    const CField<Scalar> c = (&h == &f) ? a : propagate_x(g, h, t);
    return propagate_x(g, cubic_product2(g, a, b, c), -t);
}

// 1-D version on x-axis coefficients.
template <typename Scalar>
CArray<Scalar> op_I(const Grid1D<Scalar>& g, const CArray<Scalar>& f, const CArray<Scalar>& gg, const CArray<Scalar>& h,
                    Scalar t)
{
    auto prop = [&](const CArray<Scalar>& v, Scalar s) {
        CArray<Scalar> out(v.size());
        for (Index m = 0; m < g.n; ++m)
            out(m) = std::polar(Scalar(1), -s * g.xi(m) * g.xi(m)) * v(m);
        return out;
    };
    return prop(cubic_product(g, prop(f, t), prop(gg, t), prop(h, t)), -t);
}

// N^t[F, G, H] = exp(-itA)(exp(itA)F conj(exp(itA)G) exp(itA)H).
template <typename Scalar>
CField<Scalar> op_N(const Grid2D<Scalar>& g, const CField<Scalar>& F, const CField<Scalar>& G, const CField<Scalar>& H,
                    Scalar t)
{
    const CField<Scalar> a = propagate(g, F, t);
    const CField<Scalar> b = (&G == &F) ? a : propagate(g, G, t);
    const CField<Scalar> c = (&H == &F) ? a : propagate(g, H, t);
    return propagate(g, cubic_product2(g, a, b, c), -t);
}

// Second path: exp(it|D_y|) I^t[exp(-it|D_y|)F, ...].
template <typename Scalar>
CField<Scalar> op_N_via_I(const Grid2D<Scalar>& g, const CField<Scalar>& F, const CField<Scalar>& G,
                          const CField<Scalar>& H, Scalar t)
{
    const CField<Scalar> a = propagate_absdy(g, F, -t);
    const CField<Scalar> b = propagate_absdy(g, G, -t);
    const CField<Scalar> c = propagate_absdy(g, H, -t);
    return propagate_absdy(g, op_I(g, a, b, c, t), t);
}

template <typename Scalar>
Spectrum2D<Scalar> op_N(const Spectrum2D<Scalar>& F, const Spectrum2D<Scalar>& G, const Spectrum2D<Scalar>& H, Scalar t)
{
    const auto f = to_representation(F, Representation::Fourier);
    const auto gg = to_representation(G, Representation::Fourier);
    const auto h = to_representation(H, Representation::Fourier);
    return {f.grid, op_N(f.grid, f.values, gg.values, h.values, t), Representation::Fourier};
}

// N_0^t = Pi_+ N^t[F_+, G_+, H_+] + Pi_- N^t[F_-, G_-, H_-], projections in eta.
template <typename Scalar>
CField<Scalar> op_N0(const Grid2D<Scalar>& g, const CField<Scalar>& F, const CField<Scalar>& G, const CField<Scalar>& H,
                     Scalar t)
{
    CField<Scalar> out = CField<Scalar>::Zero(F.rows(), F.cols());
    for (Sign s : {Sign::Plus, Sign::Minus}) {
        const CField<Scalar> fs = szego_project_y(g.gy, F, s);
        const CField<Scalar> gs = szego_project_y(g.gy, G, s);
        const CField<Scalar> hs = szego_project_y(g.gy, H, s);
        if ((fs == Complex<Scalar>(0)).all() || (gs == Complex<Scalar>(0)).all() || (hs == Complex<Scalar>(0)).all())
            continue;
        out += szego_project_y(g.gy, op_N(g, fs, gs, hs, t), s);
    }
    return out;
}

template <typename Scalar>
Spectrum2D<Scalar> op_N0(const Spectrum2D<Scalar>& F, const Spectrum2D<Scalar>& G, const Spectrum2D<Scalar>& H,
                         Scalar t)
{
    const auto f = to_representation(F, Representation::Fourier);
    const auto gg = to_representation(G, Representation::Fourier);
    const auto h = to_representation(H, Representation::Fourier);
    return {f.grid, op_N0(f.grid, f.values, gg.values, h.values, t), Representation::Fourier};
}

template <typename Scalar>
struct DecayRow {
    Scalar t, z_value, l2_value;
};

template <typename Scalar>
struct DecayTable {
    std::vector<DecayRow<Scalar>> rows;
    LinearFit fit_l2;
    LinearFit fit_z;
};

// || N_0^t[F,F,F] - (pi/t) R[F,F,F] || in Z and L^2 for each t; log-log slopes over the upper decade.
template <typename Scalar>
DecayTable<Scalar> resonant_comparison(const Spectrum2D<Scalar>& F, const std::vector<Scalar>& t_list, bool with_z = true)
{
    const auto f = to_representation(F, Representation::Fourier);
    const auto& g = f.grid;
    const CField<Scalar> R = resonant_trilinear(g, f.values, f.values, f.values);
    DecayTable<Scalar> tab;
    for (Scalar t : t_list) {
        if (!(t > Scalar(0)))
            throw std::invalid_argument("resonant_comparison needs positive times");
        Spectrum2D<Scalar> d{g, op_N0(g, f.values, f.values, f.values, t) - (pi_v<Scalar> / t) * R,
                             Representation::Fourier};
        tab.rows.push_back({t, with_z ? z_norm(d) : Scalar(0), l2_norm(d)});
    }
    std::vector<double> ts, zs, ls;
    const Scalar tmax = t_list.empty() ? Scalar(0) : *std::max_element(t_list.begin(), t_list.end());
    for (const auto& r : tab.rows)
        if (r.t >= tmax / Scalar(10) && r.l2_value > Scalar(0)) {
            ts.push_back(double(r.t));
            ls.push_back(double(r.l2_value));
            zs.push_back(double(r.z_value));
        }
    if (ts.size() >= 2) {
        tab.fit_l2 = loglog_fit(ts, ls);
        if (with_z)
            tab.fit_z = loglog_fit(ts, zs);
    }
    return tab;
}

template <typename Scalar>
Scalar mass(const Spectrum2D<Scalar>& U)
{
    const Scalar n = l2_norm(U);
    return n * n;
}

// 1/2 int (|d_x U|^2 + |D_y|U conj U) + sign/4 int |U|^4; the quartic term is exact on the padded grid.
template <typename Scalar>
Scalar hamiltonian(const Spectrum2D<Scalar>& U, Scalar sign = Scalar(1))
{
    using std::abs;
    const auto f = to_representation(U, Representation::Fourier);
    const Scalar kin = weighted_l2(f, [](Scalar xi, Scalar eta) { return xi * xi + abs(eta); });
    const CField<Scalar> phys = padded_physical(f.grid, f.values);
    const Grid2D<Scalar> p = padded_grid(f.grid);
    const Scalar quart = phys.abs2().square().sum() * p.gx.dx() * p.gy.dx();
    return kin * kin / Scalar(2) + sign * quart / Scalar(4);
}

} // namespace szlab

#endif
