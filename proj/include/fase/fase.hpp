#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fase/dictionary.hpp"
#include "fase/gram.hpp"
#include "fase/grid.hpp"
#include "fase/model.hpp"
#include "fase/opcount.hpp"

namespace fase {

/// Weighted scalar products R_k = sum r * conj(phi_k) * w between the
/// current residual and every atom, after `nu` iterations.
struct ResidualProducts {
    std::vector<Complex> values;
    std::size_t nu = 0;
};

/// R_k(0) = sum s * conj(phi_k) * w by direct summation.
ResidualProducts initial_scalar_products(const Field2D& signal, const WeightField& weight,
                                         const Dictionary& dict);

struct FaseOptions {
    /// Use the FFT shortcut for the initial products of frequency-tagged atoms.
    bool fft_initial_products = false;
    /// Minimum number of tagged atoms for the FFT shortcut to kick in.
    std::size_t fft_min_tagged = 64;
    /// Called after every iteration with the updated products.
    std::function<void(std::size_t nu, std::span<const Complex> products)> after_iteration;
};

struct FaseExtrapolation : Extrapolation {
    ResidualProducts products;
};

/// Fast Selective Extrapolation. Iterates on R, C and D only:
///     u = argmax |R_k| D_k,  c = gamma R_u D_u^2,  R_k -= c C(k,u)
/// Throws StaleTableError unless `tables` was built for this dictionary and
/// the weight field derived from (mask, cfg.rho_hat).
FaseExtrapolation fase_extrapolate(const Field2D& signal, const LossMask& mask,
                                   const Dictionary& dict, const GramTable& tables,
                                   const ExtrapConfig& cfg, const FaseOptions& options = {});

/// Instrumented fase_extrapolate (direct initial products, no hooks).
std::pair<FaseExtrapolation, OpCounter> fase_extrapolate_counted(const Field2D& signal,
                                                                 const LossMask& mask,
                                                                 const Dictionary& dict,
                                                                 const GramTable& tables,
                                                                 const ExtrapConfig& cfg);

struct AppliedModel {
    Field2D output;
    /// Largest |Im g| over the loss area; nonzero only for complex models
    /// that are not conjugate-symmetric.
    double max_imag = 0.0;
};

/// Keeps the signal on the support and substitutes Re g on the loss area.
AppliedModel apply_model(const Field2D& signal, const SparseModel& model, const LossMask& mask,
                         const Dictionary& dict);

}  // namespace fase
