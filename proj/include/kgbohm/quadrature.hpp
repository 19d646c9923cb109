// quadrature.hpp: globally adaptive 21-point Gauss-Kronrod integration
//
// QUADPACK QAG-style bisection of the interval with the largest error
// estimate. Integrands return a fixed-size array of complex values so that
// several moments of the same spectral density share one subdivision.

#pragma once

#include "model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace kgbohm {

namespace gk21 {

// Abscissae of the 21-point Kronrod rule on [-1, 1] (non-negative half, the
// odd indices are the 10-point Gauss nodes) and the matching weights.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980259986, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

} // namespace gk21

/// Settings for the momentum-space oracle.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double k_window = 12.0; // half-width beyond k0, in units of sigma
    int max_subdivisions = 60;
};

inline void validate(const QuadratureSpec& spec)
{
    if (!(spec.abs_tol > 0.0))
        throw ConfigError("quadrature abs_tol must be positive");
    if (!(spec.k_window >= 8.0))
        throw ConfigError("quadrature k_window must be at least 8 sigma");
    if (spec.max_subdivisions < 1)
        throw ConfigError("quadrature needs at least one subdivision");
}

template <std::size_t N>
using ComplexVec = std::array<complex, N>;

template <std::size_t N>
struct QuadratureResult {
    ComplexVec<N> value{};
    double error = 0.0;
    int intervals = 0;
};

/// Non-convergence; carries the best estimate reached.
template <std::size_t N>
struct QuadratureError : Error {
    QuadratureResult<N> best;
    QuadratureError(const std::string& what, QuadratureResult<N> best_)
        : Error(what), best(best_)
    {
    }
};

namespace detail {

template <std::size_t N>
struct Segment {
    double a = 0.0;
    double b = 0.0;
    ComplexVec<N> value{};
    double error = 0.0;
};

template <std::size_t N, class F>
Segment<N> gk21_segment(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    ComplexVec<N> kronrod{};
    ComplexVec<N> gauss{};
    const ComplexVec<N> fc = f(center);
    for (std::size_t n = 0; n < N; ++n)
        kronrod[n] = fc[n] * gk21::wgk[10];

    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * gk21::xgk[i];
        const ComplexVec<N> f1 = f(center - dx);
        const ComplexVec<N> f2 = f(center + dx);
        for (std::size_t n = 0; n < N; ++n) {
            const complex sum = f1[n] + f2[n];
            kronrod[n] += gk21::wgk[i] * sum;
            if (i % 2 == 1)
                gauss[n] += gk21::wg[i / 2] * sum;
        }
    }

    Segment<N> seg{a, b, {}, 0.0};
    for (std::size_t n = 0; n < N; ++n) {
        seg.value[n] = kronrod[n] * half;
        seg.error = std::max(seg.error, std::abs((kronrod[n] - gauss[n]) * half));
    }
    return seg;
}

} // namespace detail

/// Integrate f over the union of consecutive intervals given by `breaks`.
///
/// The break points are never bisected across, which is how kinks of the
/// integrand (such as |k| at k = 0) are kept on interval boundaries.
template <std::size_t N, class F>
QuadratureResult<N> integrate_adaptive(F&& f, std::initializer_list<double> breaks,
                                       double abs_tol, int max_subdivisions)
{
    std::vector<detail::Segment<N>> segs;
    const std::vector<double> pts(breaks);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        segs.push_back(detail::gk21_segment<N>(f, pts[i], pts[i + 1]));

    auto total = [&] {
        QuadratureResult<N> r;
        for (const auto& s : segs) {
            for (std::size_t n = 0; n < N; ++n)
                r.value[n] += s.value[n];
            r.error += s.error;
        }
        r.intervals = static_cast<int>(segs.size());
        return r;
    };

    auto result = total();
    while (result.error > abs_tol) {
        if (static_cast<int>(segs.size()) >= max_subdivisions)
            throw QuadratureError<N>("adaptive quadrature did not converge: error estimate "
                                         + std::to_string(result.error) + " after "
                                         + std::to_string(segs.size()) + " intervals",
                                     result);
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const auto& l, const auto& r) { return l.error < r.error; });
        const double a = worst->a;
        const double b = worst->b;
        const double mid = 0.5 * (a + b);
        *worst = detail::gk21_segment<N>(f, a, mid);
        segs.push_back(detail::gk21_segment<N>(f, mid, b));
        result = total();
    }
    return result;
}

} // namespace kgbohm
