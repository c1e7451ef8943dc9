#pragma once

#include <functional>
#include <span>
#include <utility>

#include "fase/dictionary.hpp"
#include "fase/grid.hpp"
#include "fase/model.hpp"
#include "fase/opcount.hpp"

namespace fase {

/// Weighted projection coefficient of `residual` onto atom k:
///     p_k = sum(r * conj(phi_k) * w) / sum(conj(phi_k) * w * phi_k)
/// Throws DegenerateAtomError when the denominator vanishes.
Complex weighted_projection(const Field2D& residual, const Dictionary& dict, std::size_t k,
                            const WeightField& weight);
Complex weighted_projection(const Field2D& residual, const Atom& atom, const WeightField& weight);

/// Index maximising |p_k|^2 * sum(conj(phi_k) w phi_k) over the
/// non-degenerate atoms, lowest index on ties. `floor` is the tie floor in
/// the squared-metric domain (0 disables it).
std::size_t se_select(std::span<const Complex> projections, const Dictionary& dict,
                      const WeightField& weight, double floor = 0.0);

struct SeHooks {
    /// Called after every iteration with the updated residual.
    std::function<void(std::size_t nu, const Field2D& residual)> after_iteration;
};

struct SeExtrapolation : Extrapolation {
    Field2D residual{1, 1};
};

/// Selective Extrapolation: I iterations of weighted projection onto every
/// atom, best-fit selection, damped coefficient, model and residual update.
SeExtrapolation se_extrapolate(const Field2D& signal, const LossMask& mask, const Dictionary& dict,
                               const ExtrapConfig& cfg, const SeHooks& hooks = {});

/// Same as se_extrapolate, additionally tallying operations.
std::pair<SeExtrapolation, OpCounter> se_extrapolate_counted(const Field2D& signal,
                                                             const LossMask& mask,
                                                             const Dictionary& dict,
                                                             const ExtrapConfig& cfg);

}  // namespace fase
