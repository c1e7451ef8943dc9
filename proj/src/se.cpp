#include "fase/se.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "fase/errors.hpp"
#include "fase/selection.hpp"
#include "kernels.hpp"

namespace fase {

namespace {

using detail::Planar;

void check_shapes(const Field2D& f, const Dictionary& dict, const WeightField& w) {
    if (!dict.same_shape(f) || w.rows() != f.rows() || w.cols() != f.cols()) {
        throw ShapeError("signal, weight field and dictionary atoms must share one shape");
    }
}

struct PlanarField {
    std::vector<double> re;
    std::vector<double> im;

    explicit PlanarField(const Field2D& f) : re(f.size()), im(f.size()) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            re[i] = f[i].real();
            im[i] = f[i].imag();
        }
    }
    Planar view() const { return {re.data(), im.data()}; }
    Field2D to_field(std::size_t rows, std::size_t cols) const {
        std::vector<Complex> v(re.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = {re[i], im[i]};
        return Field2D(rows, cols, std::move(v));
    }
};

Planar atom_view(const Dictionary& d, std::size_t k) { return {d.re(k).data(), d.im(k).data()}; }

template <class Counter, bool RealAtoms>
SeExtrapolation run_se(const Field2D& signal, const LossMask& mask, const Dictionary& dict,
                       const ExtrapConfig& cfg, const SeHooks& hooks, Counter& ops) {
    const std::size_t S = dict.samples();
    const std::size_t K = dict.size();
    const WeightField weight = build_weight_field(mask, cfg.rho_hat);
    const double* w = weight.values().data();

    PlanarField residual(signal);  // r(0) = s
    PlanarField model(Field2D(signal.rows(), signal.cols()));

    std::vector<Complex> numerators(K);
    std::vector<double> energies(K);
    std::vector<Complex> projections(K);
    std::vector<bool> degenerate(K);

    SeExtrapolation out;
    out.model = SparseModel{signal.rows(), signal.cols(), dict.hash(), {}};
    out.trace.reserve(cfg.iterations);
    double floor_sq = 0.0;

    for (std::size_t nu = 1; nu <= cfg.iterations; ++nu) {
        // Weighted projection of the residual onto every atom.
        double max_energy = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            detail::projection_terms<RealAtoms>(residual.view(), atom_view(dict, k), w, S,
                                                numerators[k], energies[k]);
            max_energy = std::max(max_energy, energies[k]);
        }
        ops.mul(4 * S * K);
        ops.add(2 * S * K);
        if (!(max_energy > 0.0)) throw NoSelectableAtomError("every atom has zero weighted energy");
        const double eps = kDegenerateRelative * max_energy;
        for (std::size_t k = 0; k < K; ++k) {
            degenerate[k] = energies[k] <= eps;
            if (!degenerate[k]) {
                projections[k] = numerators[k] / energies[k];
                ops.div(1);
            } else {
                projections[k] = {};
            }
        }

        // Selection by |p_k|^2 * sum(conj(phi_k) w phi_k).
        TieAwareArgmax argmax(TieAwareArgmax::Domain::squared, floor_sq);
        for (std::size_t k = 0; k < K; ++k) {
            const double e = detail::weighted_energy<RealAtoms>(atom_view(dict, k), w, S);
            if (degenerate[k]) continue;
            argmax.offer(k, std::norm(projections[k]) * e);
        }
        ops.mul((2 * S + 1) * K);
        ops.add(S * K);
        ops.other(2 * K);  // |p|^2 and comparison per atom
        const std::size_t u = *argmax.best();
        if (nu == 1) floor_sq = kTieFloor * kTieFloor * argmax.value();

        const Complex p = projections[u];
        const Complex c = cfg.gamma * p;
        ops.mul(1);

        detail::axpy<RealAtoms>(model.re.data(), model.im.data(), c, atom_view(dict, u), S, +1.0);
        detail::axpy<RealAtoms>(residual.re.data(), residual.im.data(), c, atom_view(dict, u), S, -1.0);
        ops.mul(2 * S);
        ops.add(2 * S);

        out.model.terms.push_back({u, c});
        out.trace.push_back({nu, u, p, c});
        if (hooks.after_iteration) {
            hooks.after_iteration(nu, residual.to_field(signal.rows(), signal.cols()));
        }
    }
    out.model_field = model.to_field(signal.rows(), signal.cols());
    out.residual = residual.to_field(signal.rows(), signal.cols());
    return out;
}

template <class Counter>
SeExtrapolation dispatch(const Field2D& signal, const LossMask& mask, const Dictionary& dict,
                         const ExtrapConfig& cfg, const SeHooks& hooks, Counter& ops) {
    cfg.validate();
    if (!mask.same_shape(signal)) throw ShapeError("mask and signal differ in shape");
    if (!dict.same_shape(signal)) throw ShapeError("dictionary atoms and signal differ in shape");
    if (dict.is_real()) return run_se<Counter, true>(signal, mask, dict, cfg, hooks, ops);
    return run_se<Counter, false>(signal, mask, dict, cfg, hooks, ops);
}

}  // namespace

Complex weighted_projection(const Field2D& residual, const Dictionary& dict, std::size_t k,
                            const WeightField& weight) {
    check_shapes(residual, dict, weight);
    if (k >= dict.size()) throw ParameterError("atom index " + std::to_string(k) + " out of range");
    const PlanarField r(residual);
    Complex num;
    double energy = 0.0;
    detail::projection_terms<false>(r.view(), atom_view(dict, k), weight.values().data(),
                                    dict.samples(), num, energy);
    if (!(energy > 0.0)) {
        throw DegenerateAtomError(k, "atom " + std::to_string(k) + " has zero weighted energy");
    }
    return num / energy;
}

Complex weighted_projection(const Field2D& residual, const Atom& atom, const WeightField& weight) {
    const Dictionary single(std::vector<Atom>{atom});
    return weighted_projection(residual, single, 0, weight);
}

std::size_t se_select(std::span<const Complex> projections, const Dictionary& dict,
                      const WeightField& weight, double floor) {
    if (projections.size() != dict.size()) {
        throw ShapeError("one projection per atom is required");
    }
    if (weight.rows() != dict.rows() || weight.cols() != dict.cols()) {
        throw ShapeError("weight field and dictionary atoms differ in shape");
    }
    std::vector<double> energies(dict.size());
    double max_energy = 0.0;
    for (std::size_t k = 0; k < dict.size(); ++k) {
        energies[k] = detail::weighted_energy<false>(atom_view(dict, k), weight.values().data(),
                                                     dict.samples());
        max_energy = std::max(max_energy, energies[k]);
    }
    if (!(max_energy > 0.0)) throw NoSelectableAtomError("every atom has zero weighted energy");
    TieAwareArgmax argmax(TieAwareArgmax::Domain::squared, floor);
    for (std::size_t k = 0; k < dict.size(); ++k) {
        if (energies[k] <= kDegenerateRelative * max_energy) continue;
        argmax.offer(k, std::norm(projections[k]) * energies[k]);
    }
    return *argmax.best();
}

SeExtrapolation se_extrapolate(const Field2D& signal, const LossMask& mask, const Dictionary& dict,
                               const ExtrapConfig& cfg, const SeHooks& hooks) {
    NoCounter ops;
    return dispatch(signal, mask, dict, cfg, hooks, ops);
}

std::pair<SeExtrapolation, OpCounter> se_extrapolate_counted(const Field2D& signal,
                                                             const LossMask& mask,
                                                             const Dictionary& dict,
                                                             const ExtrapConfig& cfg) {
    OpCounter ops;
    SeExtrapolation result = dispatch(signal, mask, dict, cfg, {}, ops);
    return {std::move(result), ops};
}

}  // namespace fase
