#include "fase/gram.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "fase/errors.hpp"
#include "fase/hash.hpp"
#include "fase/selection.hpp"

namespace fase {

std::uint64_t provenance_hash(const Dictionary& dict, const WeightField& weight) noexcept {
    ContentHash h;
    h.word(dict.hash()).word(weight.hash());
    return h.digest();
}

GramTable::GramTable(std::size_t size, std::vector<Complex> c, std::vector<double> d,
                     std::uint64_t provenance)
    : size_(size), c_(std::move(c)), d_(std::move(d)), provenance_(provenance) {
    if (size_ == 0) throw ParameterError("Gram table needs at least one atom");
    if (c_.size() != size_ * size_ || d_.size() != size_) {
        throw ShapeError("Gram table payload does not match its declared size");
    }
}

std::vector<double> inverse_root_energies(std::span<const Complex> c, std::size_t size) {
    double max_diag = 0.0;
    for (std::size_t k = 0; k < size; ++k) max_diag = std::max(max_diag, c[k * size + k].real());
    const double eps = kDegenerateRelative * max_diag;
    std::vector<double> d(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
        const double e = c[k * size + k].real();
        if (e > eps) d[k] = 1.0 / std::sqrt(e);
    }
    return d;
}

namespace {

constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kSampleChunk = 256;

// Accumulates C(k,l) += sum_i cw_k[i] * phi_l[i] over one sample chunk for
// the rows of one block, where cw_k = conj(phi_k) * w is precomputed.
struct ChunkPass {
    const Dictionary& dict;
    std::size_t K;
    std::size_t s0;
    std::size_t len;
    const double* cwr;  // [row][len]
    const double* cwi;
    Complex* c;

    const double* ar(std::size_t l) const { return dict.re(l).data() + s0; }
    const double* ai(std::size_t l) const { return dict.im(l).data() + s0; }

    void complex_1x1(std::size_t row, std::size_t k, std::size_t l) const {
        const double* pr = cwr + row * len;
        const double* pi = cwi + row * len;
        const double* xr = ar(l);
        const double* xi = ai(l);
        double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
        for (std::size_t i = 0; i < len; ++i) {
            re += pr[i] * xr[i] - pi[i] * xi[i];
            im += pr[i] * xi[i] + pi[i] * xr[i];
        }
        c[k * K + l] += Complex(re, im);
    }

    void complex_2x2(std::size_t row, std::size_t k, std::size_t l) const {
        const double* p0r = cwr + row * len;
        const double* p0i = cwi + row * len;
        const double* p1r = p0r + len;
        const double* p1i = p0i + len;
        const double* x0r = ar(l);
        const double* x0i = ai(l);
        const double* x1r = ar(l + 1);
        const double* x1i = ai(l + 1);
        double r00 = 0, i00 = 0, r01 = 0, i01 = 0, r10 = 0, i10 = 0, r11 = 0, i11 = 0;
#pragma omp simd reduction(+ : r00, i00, r01, i01, r10, i10, r11, i11)
        for (std::size_t i = 0; i < len; ++i) {
            r00 += p0r[i] * x0r[i] - p0i[i] * x0i[i];
            i00 += p0r[i] * x0i[i] + p0i[i] * x0r[i];
            r01 += p0r[i] * x1r[i] - p0i[i] * x1i[i];
            i01 += p0r[i] * x1i[i] + p0i[i] * x1r[i];
            r10 += p1r[i] * x0r[i] - p1i[i] * x0i[i];
            i10 += p1r[i] * x0i[i] + p1i[i] * x0r[i];
            r11 += p1r[i] * x1r[i] - p1i[i] * x1i[i];
            i11 += p1r[i] * x1i[i] + p1i[i] * x1r[i];
        }
        c[k * K + l] += Complex(r00, i00);
        c[k * K + l + 1] += Complex(r01, i01);
        c[(k + 1) * K + l] += Complex(r10, i10);
        c[(k + 1) * K + l + 1] += Complex(r11, i11);
    }

    void real_1x1(std::size_t row, std::size_t k, std::size_t l) const {
        const double* p = cwr + row * len;
        const double* x = ar(l);
        double s = 0.0;
#pragma omp simd reduction(+ : s)
        for (std::size_t i = 0; i < len; ++i) s += p[i] * x[i];
        c[k * K + l] += s;
    }

    void real_4x4(std::size_t row, std::size_t k, std::size_t l) const {
        const double* p0 = cwr + row * len;
        const double* p1 = p0 + len;
        const double* p2 = p1 + len;
        const double* p3 = p2 + len;
        const double* x0 = ar(l);
        const double* x1 = ar(l + 1);
        const double* x2 = ar(l + 2);
        const double* x3 = ar(l + 3);
        double s00 = 0, s01 = 0, s02 = 0, s03 = 0, s10 = 0, s11 = 0, s12 = 0, s13 = 0;
        double s20 = 0, s21 = 0, s22 = 0, s23 = 0, s30 = 0, s31 = 0, s32 = 0, s33 = 0;
#pragma omp simd reduction(+ : s00, s01, s02, s03, s10, s11, s12, s13, s20, s21, s22, s23, s30, s31, s32, s33)
        for (std::size_t i = 0; i < len; ++i) {
            s00 += p0[i] * x0[i]; s01 += p0[i] * x1[i]; s02 += p0[i] * x2[i]; s03 += p0[i] * x3[i];
            s10 += p1[i] * x0[i]; s11 += p1[i] * x1[i]; s12 += p1[i] * x2[i]; s13 += p1[i] * x3[i];
            s20 += p2[i] * x0[i]; s21 += p2[i] * x1[i]; s22 += p2[i] * x2[i]; s23 += p2[i] * x3[i];
            s30 += p3[i] * x0[i]; s31 += p3[i] * x1[i]; s32 += p3[i] * x2[i]; s33 += p3[i] * x3[i];
        }
        const double s[4][4] = {{s00, s01, s02, s03}, {s10, s11, s12, s13},
                                {s20, s21, s22, s23}, {s30, s31, s32, s33}};
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) c[(k + a) * K + l + b] += s[a][b];
        }
    }

    // Covers rows [k0, k0+rows) against columns [k0, K).
    void run(std::size_t k0, std::size_t rows, bool real) const {
        const std::size_t tile = real ? 4 : 2;
        for (std::size_t l = k0; l < K; l += tile) {
            const std::size_t cols = std::min(tile, K - l);
            std::size_t r = 0;
            if (cols == tile) {
                for (; r + tile <= rows; r += tile) {
                    if (real) {
                        real_4x4(r, k0 + r, l);
                    } else {
                        complex_2x2(r, k0 + r, l);
                    }
                }
            }
            for (; r < rows; ++r) {
                for (std::size_t b = l; b < l + cols; ++b) {
                    if (real) {
                        real_1x1(r, k0 + r, b);
                    } else {
                        complex_1x1(r, k0 + r, b);
                    }
                }
            }
        }
    }
};

}  // namespace

GramTable build_gram_tables(const Dictionary& dict, const WeightField& weight) {
    if (weight.rows() != dict.rows() || weight.cols() != dict.cols()) {
        throw ShapeError("weight field and dictionary atoms differ in shape");
    }
    const std::size_t K = dict.size();
    const std::size_t S = dict.samples();
    const bool real = dict.is_real();
    const double* w = weight.values().data();
    std::vector<Complex> c(K * K);
    const std::size_t blocks = (K + kRowBlock - 1) / kRowBlock;

#pragma omp parallel
    {
        std::vector<double> cwr(kRowBlock * kSampleChunk);
        std::vector<double> cwi(kRowBlock * kSampleChunk);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t b = 0; b < blocks; ++b) {
            const std::size_t k0 = b * kRowBlock;
            const std::size_t rows = std::min(kRowBlock, K - k0);
            for (std::size_t s0 = 0; s0 < S; s0 += kSampleChunk) {
                const std::size_t len = std::min(kSampleChunk, S - s0);
                for (std::size_t r = 0; r < rows; ++r) {
                    const double* a = dict.re(k0 + r).data() + s0;
                    const double* bi = dict.im(k0 + r).data() + s0;
                    for (std::size_t i = 0; i < len; ++i) {
                        cwr[r * len + i] = a[i] * w[s0 + i];
                        cwi[r * len + i] = -bi[i] * w[s0 + i];
                    }
                }
                ChunkPass{dict, K, s0, len, cwr.data(), cwi.data(), c.data()}.run(k0, rows, real);
            }
        }
    }

    // Diagonal is real by construction; mirror the upper triangle.
    for (std::size_t k = 0; k < K; ++k) {
        c[k * K + k] = Complex(c[k * K + k].real(), 0.0);
        for (std::size_t l = k + 1; l < K; ++l) c[l * K + k] = std::conj(c[k * K + l]);
    }
    std::vector<double> d = inverse_root_energies(c, K);
    return GramTable(K, std::move(c), std::move(d), provenance_hash(dict, weight));
}

namespace {
constexpr char kGramMagic[8] = {'F', 'G', 'R', 'M', ' ', 'v', '1', '\n'};
}

void write_gram_table(std::ostream& out, const GramTable& table) {
    out.write(kGramMagic, sizeof kGramMagic);
    detail::put_u64(out, table.size());
    detail::put_u64(out, table.provenance());
    for (const Complex& v : table.c_values()) {
        detail::put_f64(out, v.real());
        detail::put_f64(out, v.imag());
    }
    for (double v : table.d_values()) detail::put_f64(out, v);
    if (!out) throw FormatError("failed to write Gram table");
}

void save_gram_table(const std::filesystem::path& path, const GramTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_gram_table(out, table);
}

GramTable read_gram_table(std::istream& in) {
    char magic[8] = {};
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kGramMagic, sizeof magic) != 0) {
        throw FormatError("FGRM: bad magic");
    }
    std::uint64_t size = 0, provenance = 0;
    if (!detail::get_u64(in, size) || !detail::get_u64(in, provenance)) {
        throw FormatError("FGRM: truncated header");
    }
    if (size == 0 || size > (1u << 16)) throw FormatError("FGRM: implausible table size");
    std::vector<Complex> c(size * size);
    for (auto& v : c) {
        double re = 0.0, im = 0.0;
        if (!detail::get_f64(in, re) || !detail::get_f64(in, im)) throw FormatError("FGRM: truncated C payload");
        v = {re, im};
    }
    std::vector<double> d(size);
    for (auto& v : d) {
        if (!detail::get_f64(in, v)) throw FormatError("FGRM: truncated D payload");
    }
    char extra = 0;
    if (in.get(extra)) throw FormatError("FGRM: trailing bytes after payload");
    return GramTable(size, std::move(c), std::move(d), provenance);
}

GramTable load_gram_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open Gram table " + path.string());
    return read_gram_table(in);
}

}  // namespace fase
