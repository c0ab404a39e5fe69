#pragma once

#include <cmath>
#include <cstddef>

#include "ratsym/biortho.hpp"
#include "ratsym/errors.hpp"
#include "ratsym/measure.hpp"

namespace ratsym {

// The four truncated kernels below are named by content. Each serves as a
// different block label depending on which variable family drives the
// evaluation; the mirrored branches reuse the same functions with the
// families exchanged.

/// Bundles the biorthogonal system with the measure it was built from plus
/// the pole-separation tolerance. All kernel evaluations are pure functions
/// of this context.
struct KernelContext {
    const Measure* m = nullptr;
    const BiorthoSystem* sys = nullptr;
    double eps_pole = 1e-8;
};

namespace detail {
inline void require_truncation(const KernelContext& ctx, long j) {
    if (j < 0 || static_cast<std::size_t>(j) > ctx.sys->truncation())
        throw precondition_error("kernel truncation outside factorized order");
}
inline void require_apart(cx a, cx b, double eps, const char* what) {
    if (std::abs(a - b) <= eps)
        throw precondition_error(std::string(what) + ": coincident or nearly coincident points");
}
} // namespace detail

/// sum_{n<J} P_n(xi) S_n(zeta). The truncated reproducing kernel in the
/// polynomial sector.
inline cx kernel_PS(const KernelContext& ctx, long j, cx xi, cx zeta) {
    detail::require_truncation(ctx, j);
    CompensatedSum s;
    for (long n = 0; n < j; ++n) s.add(ctx.sys->eval_P(n, xi) * ctx.sys->eval_S(n, zeta));
    return s.value();
}

/// sum_{n<J} P_n(xi) Stilde_n(eta) + 1/(xi - eta). Finite sum and pole term
/// are formed separately and combined at the end.
inline cx kernel_PStilde(const KernelContext& ctx, long j, cx xi, cx eta) {
    detail::require_truncation(ctx, j);
    detail::require_apart(xi, eta, ctx.eps_pole, "kernel_PStilde");
    if (ctx.m->min_distance_to_x_support(eta) <= ctx.eps_pole)
        throw precondition_error("kernel_PStilde: eta too close to x-support");
    CompensatedSum s;
    for (long n = 0; n < j; ++n)
        s.add(ctx.sys->eval_P(n, xi) * ctx.sys->eval_Stilde(*ctx.m, n, eta, ctx.eps_pole));
    return s.value() + 1.0 / (xi - eta);
}

/// sum_{n<J} Ptilde_n(mu) S_n(zeta) + 1/(zeta - mu).
inline cx kernel_PtildeS(const KernelContext& ctx, long j, cx mu, cx zeta) {
    detail::require_truncation(ctx, j);
    detail::require_apart(zeta, mu, ctx.eps_pole, "kernel_PtildeS");
    if (ctx.m->min_distance_to_y_support(mu) <= ctx.eps_pole)
        throw precondition_error("kernel_PtildeS: mu too close to y-support");
    CompensatedSum s;
    for (long n = 0; n < j; ++n)
        s.add(ctx.sys->eval_Ptilde(*ctx.m, n, mu, ctx.eps_pole) * ctx.sys->eval_S(n, zeta));
    return s.value() + 1.0 / (zeta - mu);
}

/// Double-pole integral sum_a w / ((eta - x_a)(mu - y_a)).
inline cx h_kernel(const KernelContext& ctx, cx mu, cx eta) {
    if (ctx.m->min_distance_to_x_support(eta) <= ctx.eps_pole)
        throw precondition_error("h_kernel: eta too close to x-support");
    if (ctx.m->min_distance_to_y_support(mu) <= ctx.eps_pole)
        throw precondition_error("h_kernel: mu too close to y-support");
    CompensatedSum s;
    for (const Atom& a : ctx.m->atoms()) s.add(a.w / ((eta - a.x) * (mu - a.y)));
    return s.value();
}

/// sum_{n<J} Ptilde_n(mu) Stilde_n(eta) - h_kernel(mu, eta).
inline cx kernel_PtildeStilde(const KernelContext& ctx, long j, cx mu, cx eta) {
    detail::require_truncation(ctx, j);
    CompensatedSum s;
    for (long n = 0; n < j; ++n)
        s.add(ctx.sys->eval_Ptilde(*ctx.m, n, mu, ctx.eps_pole) *
              ctx.sys->eval_Stilde(*ctx.m, n, eta, ctx.eps_pole));
    return s.value() - h_kernel(ctx, mu, eta);
}

} // namespace ratsym
