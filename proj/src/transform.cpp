#include "fase/transform.hpp"

#include <fftw3.h>

#include <mutex>

#include "fase/errors.hpp"
#include "kernels.hpp"

namespace fase {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

std::vector<Complex> forward_dft(std::vector<Complex> x, std::size_t M, std::size_t N) {
    FftwBuffer buf(M * N);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(N), buf.data, buf.data,
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw Error("FFTW failed to create a plan");
    for (std::size_t i = 0; i < M * N; ++i) {
        buf.data[i][0] = x[i].real();
        buf.data[i][1] = x[i].imag();
    }
    fftw_execute(plan);
    for (std::size_t i = 0; i < M * N; ++i) x[i] = {buf.data[i][0], buf.data[i][1]};
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return x;
}

}  // namespace

Field2D dft2(const Field2D& x) {
    return Field2D(x.rows(), x.cols(),
                   forward_dft({x.values().begin(), x.values().end()}, x.rows(), x.cols()));
}

ResidualProducts fft_initial_products(const Field2D& signal, const WeightField& weight,
                                      const Dictionary& dict) {
    if (!dict.same_shape(signal) || weight.rows() != signal.rows() || weight.cols() != signal.cols()) {
        throw ShapeError("signal, weight field and dictionary atoms must share one shape");
    }
    if (dict.tagged_count() == 0) {
        throw UnsupportedDictionaryError("FFT products need at least one frequency-tagged atom");
    }
    const std::size_t M = signal.rows();
    const std::size_t N = signal.cols();
    const std::size_t S = M * N;
    std::vector<Complex> sw(S);
    for (std::size_t i = 0; i < S; ++i) sw[i] = signal[i] * weight.values()[i];
    const std::vector<Complex> X = forward_dft(sw, M, N);

    std::vector<double> sr(S), si(S);
    for (std::size_t i = 0; i < S; ++i) {
        sr[i] = signal[i].real();
        si[i] = signal[i].imag();
    }
    const detail::Planar s{sr.data(), si.data()};
    ResidualProducts out{std::vector<Complex>(dict.size()), 0};
    for (std::size_t k = 0; k < dict.size(); ++k) {
        if (const auto& tag = dict.freq_tag(k)) {
            out.values[k] = X[tag->mu * N + tag->eta];
        } else {
            out.values[k] = detail::weighted_product<false>(
                s, {dict.re(k).data(), dict.im(k).data()}, weight.values().data(), S);
        }
    }
    return out;
}

GramTable fft_gram_table(const WeightField& weight, const Dictionary& dict) {
    if (weight.rows() != dict.rows() || weight.cols() != dict.cols()) {
        throw ShapeError("weight field and dictionary atoms differ in shape");
    }
    if (dict.tagged_count() != dict.size()) {
        throw UnsupportedDictionaryError("FFT Gram tables need every atom to carry a frequency tag");
    }
    const std::size_t M = dict.rows();
    const std::size_t N = dict.cols();
    std::vector<Complex> W = forward_dft({weight.values().begin(), weight.values().end()}, M, N);

    // w is real, so W[-f] = conj(W[f]). Enforcing that exactly makes every
    // C(l,k) the exact conjugate of C(k,l) and lets rows be filled in order.
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t n = 0; n < N; ++n) {
            const std::size_t f = m * N + n;
            const std::size_t g = ((M - m) % M) * N + (N - n) % N;
            if (f < g) W[g] = std::conj(W[f]);
            if (f == g) W[f] = Complex(W[f].real(), 0.0);
        }
    }

    const std::size_t K = dict.size();
    std::vector<FreqTag> tags(K);
    for (std::size_t k = 0; k < K; ++k) tags[k] = *dict.freq_tag(k);
    std::vector<Complex> c(K * K);
    for (std::size_t k = 0; k < K; ++k) {
        const FreqTag a = tags[k];
        Complex* row = c.data() + k * K;
        for (std::size_t l = 0; l < K; ++l) {
            const FreqTag b = tags[l];
            const std::size_t dm = a.mu >= b.mu ? a.mu - b.mu : a.mu + M - b.mu;
            const std::size_t dn = a.eta >= b.eta ? a.eta - b.eta : a.eta + N - b.eta;
            row[l] = W[dm * N + dn];
        }
    }
    std::vector<double> d = inverse_root_energies(c, K);
    return GramTable(K, std::move(c), std::move(d), provenance_hash(dict, weight));
}

}  // namespace fase
