#pragma once

// Planar scalar-product kernels shared by SE, FaSE and the Gram builder.
// "Real" variants assume the atom's imaginary part is identically zero.

#include <cstddef>

#include "fase/grid.hpp"

namespace fase::detail {

struct Planar {
    const double* re;
    const double* im;
};

/// sum_i (x[i] * w[i]) * conj(phi[i])
template <bool RealAtom>
inline Complex weighted_product(Planar x, Planar phi, const double* w, std::size_t S) {
    double sr = 0.0;
    double si = 0.0;
    if constexpr (RealAtom) {
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t i = 0; i < S; ++i) {
            const double tr = x.re[i] * w[i];
            const double ti = x.im[i] * w[i];
            sr += tr * phi.re[i];
            si += ti * phi.re[i];
        }
    } else {
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t i = 0; i < S; ++i) {
            const double tr = x.re[i] * w[i];
            const double ti = x.im[i] * w[i];
            sr += tr * phi.re[i] + ti * phi.im[i];
            si += ti * phi.re[i] - tr * phi.im[i];
        }
    }
    return {sr, si};
}

/// sum_i conj(phi[i]) * w[i] * phi[i]
template <bool RealAtom>
inline double weighted_energy(Planar phi, const double* w, std::size_t S) {
    double e = 0.0;
    if constexpr (RealAtom) {
#pragma omp simd reduction(+ : e)
        for (std::size_t i = 0; i < S; ++i) e += phi.re[i] * w[i] * phi.re[i];
    } else {
#pragma omp simd reduction(+ : e)
        for (std::size_t i = 0; i < S; ++i) {
            e += (phi.re[i] * w[i]) * phi.re[i] + (phi.im[i] * w[i]) * phi.im[i];
        }
    }
    return e;
}

/// Fused numerator and energy of a weighted projection; one pass over the atom.
template <bool RealAtom>
inline void projection_terms(Planar x, Planar phi, const double* w, std::size_t S, Complex& num,
                             double& energy) {
    double sr = 0.0;
    double si = 0.0;
    double e = 0.0;
    if constexpr (RealAtom) {
#pragma omp simd reduction(+ : sr, si, e)
        for (std::size_t i = 0; i < S; ++i) {
            const double tr = x.re[i] * w[i];
            const double ti = x.im[i] * w[i];
            sr += tr * phi.re[i];
            si += ti * phi.re[i];
            e += phi.re[i] * w[i] * phi.re[i];
        }
    } else {
#pragma omp simd reduction(+ : sr, si, e)
        for (std::size_t i = 0; i < S; ++i) {
            const double tr = x.re[i] * w[i];
            const double ti = x.im[i] * w[i];
            sr += tr * phi.re[i] + ti * phi.im[i];
            si += ti * phi.re[i] - tr * phi.im[i];
            e += (phi.re[i] * w[i]) * phi.re[i] + (phi.im[i] * w[i]) * phi.im[i];
        }
    }
    num = {sr, si};
    energy = e;
}

/// x[i] += c * phi[i]  (sign = +1) or x[i] -= c * phi[i]  (sign = -1)
template <bool RealAtom>
inline void axpy(double* xr, double* xi, Complex c, Planar phi, std::size_t S, double sign) {
    const double cr = sign * c.real();
    const double ci = sign * c.imag();
    if constexpr (RealAtom) {
#pragma omp simd
        for (std::size_t i = 0; i < S; ++i) {
            xr[i] += cr * phi.re[i];
            xi[i] += ci * phi.re[i];
        }
    } else {
#pragma omp simd
        for (std::size_t i = 0; i < S; ++i) {
            xr[i] += cr * phi.re[i] - ci * phi.im[i];
            xi[i] += cr * phi.im[i] + ci * phi.re[i];
        }
    }
}

}  // namespace fase::detail
