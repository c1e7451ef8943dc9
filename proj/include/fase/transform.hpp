#pragma once

#include "fase/dictionary.hpp"
#include "fase/fase.hpp"
#include "fase/gram.hpp"
#include "fase/grid.hpp"

namespace fase {

/// Forward 2D DFT, negative exponent, unnormalised:
///     X[mu, eta] = sum x[m,n] e^{-j2pi(mu m/M + eta n/N)}
Field2D dft2(const Field2D& x);

/// Initial products with one DFT of s*w: for a tagged atom (mu, eta),
/// R_k = DFT{s w}[mu, eta]. Untagged atoms use direct summation.
ResidualProducts fft_initial_products(const Field2D& signal, const WeightField& weight,
                                      const Dictionary& dict);

/// Gram table of a pure DFT dictionary from one DFT of the weight field:
///     C(k,l) = DFT{w}[(mu_k - mu_l) mod M, (eta_k - eta_l) mod N]
/// Throws UnsupportedDictionaryError if any atom lacks a frequency tag.
GramTable fft_gram_table(const WeightField& weight, const Dictionary& dict);

}  // namespace fase
