#include "fase/dictionary.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "binary_io.hpp"
#include "fase/errors.hpp"
#include "fase/hash.hpp"

namespace fase {

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::dft: return "dft";
        case Family::dct: return "dct";
        case Family::wht: return "wht";
        case Family::bdft: return "bdft";
        case Family::custom: return "custom";
    }
    return "custom";
}

Dictionary::Dictionary(std::vector<Atom> atoms) {
    if (atoms.empty()) throw ParameterError("dictionary needs at least one atom");
    rows_ = atoms.front().values.rows();
    cols_ = atoms.front().values.cols();
    const std::size_t S = samples();
    re_.reserve(atoms.size() * S);
    im_.reserve(atoms.size() * S);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const Atom& a = atoms[k];
        if (a.values.rows() != rows_ || a.values.cols() != cols_) {
            throw ShapeError("atom " + std::to_string(k) + " does not match the dictionary shape");
        }
        for (const Complex& c : a.values.values()) {
            re_.push_back(c.real());
            im_.push_back(c.imag());
        }
        families_.push_back(a.family);
        tags_.push_back(a.freq_tag);
    }
    validate_and_seal();
}

Dictionary::Dictionary(std::size_t rows, std::size_t cols, std::vector<double> re,
                       std::vector<double> im, std::vector<Family> families,
                       std::vector<std::optional<FreqTag>> tags)
    : rows_(rows), cols_(cols), re_(std::move(re)), im_(std::move(im)),
      families_(std::move(families)), tags_(std::move(tags)) {
    if (rows_ == 0 || cols_ == 0) throw ShapeError("dictionary dimensions must be positive");
    if (families_.empty()) throw ParameterError("dictionary needs at least one atom");
    const std::size_t K = families_.size();
    if (tags_.size() != K || re_.size() != K * samples() || im_.size() != K * samples()) {
        throw ShapeError("dictionary payload does not match its declared size");
    }
    validate_and_seal();
}

void Dictionary::validate_and_seal() {
    const std::size_t S = samples();
    real_ = true;
    for (std::size_t k = 0; k < size(); ++k) {
        bool nonzero = false;
        for (std::size_t i = 0; i < S; ++i) {
            const double r = re_[k * S + i];
            const double m = im_[k * S + i];
            if (!std::isfinite(r) || !std::isfinite(m)) {
                throw ParameterError("atom " + std::to_string(k) + " has a non-finite sample");
            }
            if (r != 0.0 || m != 0.0) nonzero = true;
            if (m != 0.0) real_ = false;
        }
        if (!nonzero) throw ParameterError("atom " + std::to_string(k) + " is identically zero");
        if (const auto& t = tags_[k]; t && (t->mu >= rows_ || t->eta >= cols_)) {
            throw ParameterError("atom " + std::to_string(k) + " carries an out-of-range frequency tag");
        }
    }
    ContentHash h;
    h.word(rows_).word(cols_).word(size()).values(re_).values(im_);
    hash_ = h.digest();
}

Atom Dictionary::atom(std::size_t k) const {
    if (k >= size()) throw ParameterError("atom index " + std::to_string(k) + " out of range");
    std::vector<Complex> v(samples());
    for (std::size_t i = 0; i < samples(); ++i) v[i] = value(k, i);
    return Atom{Field2D(rows_, cols_, std::move(v)), families_[k], tags_[k]};
}

std::size_t Dictionary::tagged_count() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tags_) n += t.has_value();
    return n;
}

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Exact phase bookkeeping: the DFT angle at (m, n) for frequency (mu, eta)
// is 2*pi*p/L with p = (mu*m*N + eta*n*M) mod L and L = M*N.
struct Phase {
    std::size_t p;
    std::size_t L;
};

Complex unit_root(Phase ph) {
    // Snap quarter turns so binarization sees exact zeros.
    const std::size_t q4 = 4 * ph.p;
    if (q4 % ph.L == 0) {
        switch (q4 / ph.L) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(ph.p) / static_cast<double>(ph.L);
    return {std::cos(angle), std::sin(angle)};
}

int sign_cos(Phase ph) {
    const std::size_t q4 = 4 * ph.p;
    if (q4 == ph.L || q4 == 3 * ph.L) return 0;
    return (q4 < ph.L || q4 > 3 * ph.L) ? 1 : -1;
}

int sign_sin(Phase ph) {
    if (ph.p == 0 || 2 * ph.p == ph.L) return 0;
    return 2 * ph.p < ph.L ? 1 : -1;
}

Phase dft_phase(std::size_t mu, std::size_t eta, std::size_t m, std::size_t n, std::size_t M,
                std::size_t N) {
    const std::size_t L = M * N;
    return {((mu * m) % M * N + (eta * n) % N * M) % L, L};
}

}  // namespace

Dictionary generate_dictionary(Family kind, std::size_t M, std::size_t N) {
    if (M == 0 || N == 0) throw ParameterError("dictionary dimensions must be positive");
    if (kind == Family::custom) throw ParameterError("custom dictionaries are loaded, not generated");
    if (kind == Family::wht && (!is_power_of_two(M) || !is_power_of_two(N))) {
        throw ParameterError("WHT dictionaries need power-of-two dimensions");
    }
    const std::size_t S = M * N;
    const std::size_t K = M * N;
    std::vector<double> re(K * S, 0.0);
    std::vector<double> im(K * S, 0.0);
    std::vector<Family> families(K, kind);
    std::vector<std::optional<FreqTag>> tags(K);

    for (std::size_t u = 0; u < M; ++u) {
        for (std::size_t v = 0; v < N; ++v) {
            const std::size_t k = u * N + v;
            double* ar = re.data() + k * S;
            double* ai = im.data() + k * S;
            switch (kind) {
                case Family::dft:
                    tags[k] = FreqTag{u, v};
                    for (std::size_t m = 0; m < M; ++m) {
                        for (std::size_t n = 0; n < N; ++n) {
                            const Complex z = unit_root(dft_phase(u, v, m, n, M, N));
                            ar[m * N + n] = z.real();
                            ai[m * N + n] = z.imag();
                        }
                    }
                    break;
                case Family::bdft:
                    for (std::size_t m = 0; m < M; ++m) {
                        for (std::size_t n = 0; n < N; ++n) {
                            const Phase ph = dft_phase(u, v, m, n, M, N);
                            ar[m * N + n] = sign_cos(ph);
                            ai[m * N + n] = sign_sin(ph);
                        }
                    }
                    break;
                case Family::dct: {
                    const double au = std::sqrt((u == 0 ? 1.0 : 2.0) / static_cast<double>(M));
                    const double av = std::sqrt((v == 0 ? 1.0 : 2.0) / static_cast<double>(N));
                    for (std::size_t m = 0; m < M; ++m) {
                        const double cm = std::cos(std::numbers::pi * static_cast<double>((2 * m + 1) * u) /
                                                   static_cast<double>(2 * M));
                        for (std::size_t n = 0; n < N; ++n) {
                            const double cn = std::cos(std::numbers::pi * static_cast<double>((2 * n + 1) * v) /
                                                       static_cast<double>(2 * N));
                            ar[m * N + n] = au * av * cm * cn;
                        }
                    }
                    break;
                }
                case Family::wht:
                    for (std::size_t m = 0; m < M; ++m) {
                        for (std::size_t n = 0; n < N; ++n) {
                            const int parity = std::popcount(u & m) + std::popcount(v & n);
                            ar[m * N + n] = (parity & 1) ? -1.0 : 1.0;
                        }
                    }
                    break;
                case Family::custom:
                    break;
            }
        }
    }
    return Dictionary(M, N, std::move(re), std::move(im), std::move(families), std::move(tags));
}

Dictionary union_dictionaries(std::span<const Dictionary> parts) {
    if (parts.empty()) throw ParameterError("union of an empty dictionary list");
    const std::size_t M = parts.front().rows();
    const std::size_t N = parts.front().cols();
    std::vector<double> re;
    std::vector<double> im;
    std::vector<Family> families;
    std::vector<std::optional<FreqTag>> tags;
    for (const Dictionary& d : parts) {
        if (d.rows() != M || d.cols() != N) throw ShapeError("union parts differ in atom shape");
        re.insert(re.end(), d.all_re().begin(), d.all_re().end());
        im.insert(im.end(), d.all_im().begin(), d.all_im().end());
        for (std::size_t k = 0; k < d.size(); ++k) {
            families.push_back(d.family(k));
            tags.push_back(d.freq_tag(k));
        }
    }
    return Dictionary(M, N, std::move(re), std::move(im), std::move(families), std::move(tags));
}

void write_dictionary(std::ostream& out, const Dictionary& dict) {
    const bool real = dict.is_real();
    out << "FDIC v1 " << dict.rows() << ' ' << dict.cols() << ' ' << dict.size() << ' '
        << (real ? "real" : "complex") << '\n';
    const auto re = dict.all_re();
    const auto im = dict.all_im();
    for (std::size_t i = 0; i < re.size(); ++i) {
        detail::put_f64(out, re[i]);
        if (!real) detail::put_f64(out, im[i]);
    }
    if (!out) throw FormatError("failed to write dictionary");
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& dict) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_dictionary(out, dict);
}

Dictionary read_dictionary(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("FDIC: missing header");
    std::istringstream hs(line);
    std::string magic, version, kind;
    long long M = 0, N = 0, K = 0;
    if (!(hs >> magic >> version >> M >> N >> K >> kind) || magic != "FDIC" || version != "v1") {
        throw FormatError("FDIC: malformed header '" + line + "'");
    }
    std::string extra;
    if (hs >> extra) throw FormatError("FDIC: trailing header tokens");
    if (M <= 0 || N <= 0 || K <= 0) throw FormatError("FDIC: dimensions and atom count must be positive");
    if (kind != "real" && kind != "complex") throw FormatError("FDIC: sample kind must be real or complex");
    const bool complex = kind == "complex";
    const std::size_t S = static_cast<std::size_t>(M) * static_cast<std::size_t>(N);
    if (S > (std::size_t{1} << 24) || static_cast<std::size_t>(K) > (std::size_t{1} << 24) ||
        S * static_cast<std::size_t>(K) > (std::size_t{1} << 31)) {
        throw FormatError("FDIC: declared size is implausibly large");
    }
    const std::size_t count = S * static_cast<std::size_t>(K);
    std::vector<double> re(count, 0.0);
    std::vector<double> im(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        if (!detail::get_f64(in, re[i]) || (complex && !detail::get_f64(in, im[i]))) {
            throw FormatError("FDIC: payload truncated in atom " + std::to_string(i / S));
        }
    }
    char c = 0;
    if (in.get(c)) throw FormatError("FDIC: trailing bytes after payload");
    for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k) {
        bool nonzero = false;
        for (std::size_t i = 0; i < S && !nonzero; ++i) nonzero = re[k * S + i] != 0.0 || im[k * S + i] != 0.0;
        if (!nonzero) throw FormatError("FDIC: atom " + std::to_string(k) + " is identically zero");
    }
    try {
        return Dictionary(static_cast<std::size_t>(M), static_cast<std::size_t>(N), std::move(re),
                          std::move(im), std::vector<Family>(static_cast<std::size_t>(K), Family::custom),
                          std::vector<std::optional<FreqTag>>(static_cast<std::size_t>(K)));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("FDIC: ") + e.what());
    }
}

Dictionary load_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open dictionary file " + path.string());
    return read_dictionary(in);
}

}  // namespace fase
