#include "fase/fase.hpp"

#include <cmath>
#include <string>

#include "fase/errors.hpp"
#include "fase/selection.hpp"
#include "fase/transform.hpp"
#include "kernels.hpp"

namespace fase {

namespace {

using detail::Planar;

Planar atom_view(const Dictionary& d, std::size_t k) { return {d.re(k).data(), d.im(k).data()}; }

template <class Counter>
ResidualProducts direct_products(const Field2D& signal, const WeightField& weight,
                                 const Dictionary& dict, Counter& ops) {
    if (!dict.same_shape(signal) || weight.rows() != signal.rows() || weight.cols() != signal.cols()) {
        throw ShapeError("signal, weight field and dictionary atoms must share one shape");
    }
    const std::size_t S = dict.samples();
    std::vector<double> sr(S), si(S);
    for (std::size_t i = 0; i < S; ++i) {
        sr[i] = signal[i].real();
        si[i] = signal[i].imag();
    }
    const Planar s{sr.data(), si.data()};
    const double* w = weight.values().data();
    ResidualProducts out{std::vector<Complex>(dict.size()), 0};
    for (std::size_t k = 0; k < dict.size(); ++k) {
        out.values[k] = dict.is_real() ? detail::weighted_product<true>(s, atom_view(dict, k), w, S)
                                       : detail::weighted_product<false>(s, atom_view(dict, k), w, S);
    }
    ops.mul(2 * S * dict.size());
    ops.add(S * dict.size());
    return out;
}

template <class Counter>
FaseExtrapolation run_fase(const Field2D& signal, const LossMask& mask, const Dictionary& dict,
                           const GramTable& tables, const ExtrapConfig& cfg,
                           const FaseOptions& options, Counter& ops) {
    cfg.validate();
    if (!mask.same_shape(signal)) throw ShapeError("mask and signal differ in shape");
    if (!dict.same_shape(signal)) throw ShapeError("dictionary atoms and signal differ in shape");
    const WeightField weight = build_weight_field(mask, cfg.rho_hat);
    if (tables.size() != dict.size() || tables.provenance() != provenance_hash(dict, weight)) {
        throw StaleTableError("Gram table was built for a different dictionary or weight field");
    }
    const std::size_t K = dict.size();
    const std::size_t S = dict.samples();
    const std::span<const double> D = tables.d_values();
    bool any_selectable = false;
    for (double d : D) any_selectable = any_selectable || d > 0.0;
    if (!any_selectable) throw NoSelectableAtomError("every atom has zero weighted energy");

    FaseExtrapolation out;
    const bool use_fft = !Counter::enabled && options.fft_initial_products &&
                         dict.tagged_count() >= options.fft_min_tagged;
    out.products = use_fft ? fft_initial_products(signal, weight, dict)
                           : direct_products(signal, weight, dict, ops);
    std::vector<Complex>& R = out.products.values;

    std::vector<double> gr(S, 0.0), gi(S, 0.0);
    out.model = SparseModel{signal.rows(), signal.cols(), dict.hash(), {}};
    out.trace.reserve(cfg.iterations);
    double floor = 0.0;

    for (std::size_t nu = 1; nu <= cfg.iterations; ++nu) {
        // u = argmax |R_k| * D_k
        TieAwareArgmax argmax(TieAwareArgmax::Domain::magnitude, floor);
        for (std::size_t k = 0; k < K; ++k) {
            if (D[k] == 0.0) continue;
            const double mag = std::sqrt(R[k].real() * R[k].real() + R[k].imag() * R[k].imag());
            argmax.offer(k, mag * D[k]);
        }
        ops.mul(K);
        ops.other(2 * K);  // |R_k| and comparison per atom
        const std::size_t u = *argmax.best();
        if (nu == 1) floor = kTieFloor * argmax.value();

        // c = gamma * R_u * D_u^2; the real factor gamma * D_u^2 is a table
        // constant, leaving one complex multiplication.
        const double du2 = D[u] * D[u];
        const Complex p = R[u] * du2;
        const Complex c = R[u] * (cfg.gamma * du2);
        ops.mul(1);

        if (dict.is_real()) {
            detail::axpy<true>(gr.data(), gi.data(), c, atom_view(dict, u), S, +1.0);
        } else {
            detail::axpy<false>(gr.data(), gi.data(), c, atom_view(dict, u), S, +1.0);
        }
        ops.mul(S);
        ops.add(S);

        // R_k -= c * C(k,u), reading row u: C(k,u) = conj(C(u,k)).
        const std::span<const Complex> row = tables.row(u);
        const double cr = c.real();
        const double ci = c.imag();
        for (std::size_t k = 0; k < K; ++k) {
            const double xr = row[k].real();
            const double xi = -row[k].imag();
            R[k] -= Complex(cr * xr - ci * xi, cr * xi + ci * xr);
        }
        ops.mul(K);
        ops.add(K);

        out.model.terms.push_back({u, c});
        out.trace.push_back({nu, u, p, c});
        out.products.nu = nu;
        if (options.after_iteration) options.after_iteration(nu, R);
    }

    std::vector<Complex> g(S);
    for (std::size_t i = 0; i < S; ++i) g[i] = {gr[i], gi[i]};
    out.model_field = Field2D(signal.rows(), signal.cols(), std::move(g));
    return out;
}

}  // namespace

ResidualProducts initial_scalar_products(const Field2D& signal, const WeightField& weight,
                                         const Dictionary& dict) {
    NoCounter ops;
    return direct_products(signal, weight, dict, ops);
}

FaseExtrapolation fase_extrapolate(const Field2D& signal, const LossMask& mask,
                                   const Dictionary& dict, const GramTable& tables,
                                   const ExtrapConfig& cfg, const FaseOptions& options) {
    NoCounter ops;
    return run_fase(signal, mask, dict, tables, cfg, options, ops);
}

std::pair<FaseExtrapolation, OpCounter> fase_extrapolate_counted(const Field2D& signal,
                                                                 const LossMask& mask,
                                                                 const Dictionary& dict,
                                                                 const GramTable& tables,
                                                                 const ExtrapConfig& cfg) {
    OpCounter ops;
    FaseExtrapolation result = run_fase(signal, mask, dict, tables, cfg, FaseOptions{}, ops);
    return {std::move(result), ops};
}

AppliedModel apply_model(const Field2D& signal, const SparseModel& model, const LossMask& mask,
                         const Dictionary& dict) {
    if (!mask.same_shape(signal) || model.rows != signal.rows() || model.cols != signal.cols()) {
        throw ShapeError("signal, mask and model must share one shape");
    }
    AppliedModel out{signal, 0.0};
    if (model.terms.empty()) return out;
    const Field2D g = model.materialize(dict);
    for (std::size_t i = 0; i < signal.size(); ++i) {
        if (!mask.lost(i)) continue;
        out.output[i] = g[i].real();
        out.max_imag = std::max(out.max_imag, std::abs(g[i].imag()));
    }
    return out;
}

Field2D SparseModel::materialize(const Dictionary& dict) const {
    if (dict.rows() != rows || dict.cols() != cols || dict.hash() != dictionary_hash) {
        throw ShapeError("model was generated with a different dictionary");
    }
    const std::size_t S = dict.samples();
    std::vector<double> gr(S, 0.0), gi(S, 0.0);
    for (const ModelTerm& t : terms) {
        if (t.atom >= dict.size()) throw ParameterError("model term references a missing atom");
        detail::axpy<false>(gr.data(), gi.data(), t.coefficient, atom_view(dict, t.atom), S, +1.0);
    }
    std::vector<Complex> g(S);
    for (std::size_t i = 0; i < S; ++i) g[i] = {gr[i], gi[i]};
    return Field2D(rows, cols, std::move(g));
}

}  // namespace fase
