#include "triax/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "triax/errors.hpp"
#include "triax/rng.hpp"

namespace triax {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', '3'};
constexpr std::uint16_t kFormatVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (std::uint16_t(p[1]) << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

} // namespace

void save_tensor(const Tensor3& x, const std::filesystem::path& path) {
    std::string header;
    header.append(kMagic, 4);
    put_u16(header, kFormatVersion);
    put_u64(header, static_cast<std::uint64_t>(x.n1()));
    put_u64(header, static_cast<std::uint64_t>(x.n2()));
    put_u64(header, static_cast<std::uint64_t>(x.n3()));

    std::string payload;
    payload.reserve(static_cast<std::size_t>(x.size()) * 8);
    for (double v : x.values()) put_u64(payload, std::bit_cast<std::uint64_t>(v));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("save_tensor: cannot open " + path.string() + " for writing");
    f.write(header.data(), static_cast<std::streamsize>(header.size()));
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw DataError("save_tensor: write failed for " + path.string());
}

Tensor3 load_tensor(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("load_tensor: cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());

    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("load_tensor: bad magic at byte offset 0 in " + path.string());
    if (bytes.size() < 6)
        throw FormatError("load_tensor: truncated version field at byte offset 4 in " +
                          path.string());
    const std::uint16_t version = get_u16(p + 4);
    if (version != kFormatVersion)
        throw FormatError("load_tensor: unsupported format version " + std::to_string(version) +
                          " at byte offset 4 in " + path.string());
    if (bytes.size() < 30)
        throw FormatError("load_tensor: truncated dims at byte offset 6 in " + path.string());

    const std::uint64_t n1 = get_u64(p + 6);
    const std::uint64_t n2 = get_u64(p + 14);
    const std::uint64_t n3 = get_u64(p + 22);
    if (n1 == 0 || n2 == 0 || n3 == 0 || n1 > (1ull << 32) || n2 > (1ull << 32) ||
        n3 > (1ull << 32))
        throw FormatError("load_tensor: implausible dims at byte offset 6 in " + path.string());

    const std::uint64_t count = n1 * n2 * n3;
    const std::uint64_t expected = 30 + count * 8;
    if (bytes.size() != expected)
        throw FormatError("load_tensor: payload length mismatch in " + path.string() +
                          ": expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()) + " (payload starts at byte offset 30)");

    std::vector<double> values(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i)
        values[static_cast<std::size_t>(i)] = std::bit_cast<double>(get_u64(p + 30 + i * 8));

    Tensor3 x(static_cast<index_t>(n1), static_cast<index_t>(n2), static_cast<index_t>(n3),
              std::move(values));
    if (!x.all_finite())
        throw DataError("load_tensor: non-finite values in " + path.string());
    return x;
}

namespace {

// Reads the next header token of a PGM file, skipping whitespace and
// '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("load_pgm: cannot open " + path.string());

    const std::string magic = pgm_token(f);
    if (magic != "P5" && magic != "P2")
        throw FormatError("load_pgm: " + path.string() + " is not a P5/P2 PGM file");

    long long width = 0, height = 0, maxval = 0;
    try {
        width = std::stoll(pgm_token(f));
        height = std::stoll(pgm_token(f));
        maxval = std::stoll(pgm_token(f));
    } catch (const std::exception&) {
        throw FormatError("load_pgm: malformed header in " + path.string());
    }
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw FormatError("load_pgm: invalid header values in " + path.string());

    GrayImage img;
    img.rows = static_cast<index_t>(height);
    img.cols = static_cast<index_t>(width);
    img.pixels.resize(static_cast<std::size_t>(width * height));
    const double scale = 255.0 / static_cast<double>(maxval);
    const std::size_t count = img.pixels.size();

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = pgm_token(f);
            if (tok.empty())
                throw FormatError("load_pgm: truncated P2 data in " + path.string());
            long long v;
            try {
                v = std::stoll(tok);
            } catch (const std::exception&) {
                throw FormatError("load_pgm: bad P2 sample in " + path.string());
            }
            if (v < 0 || v > maxval)
                throw FormatError("load_pgm: sample out of range in " + path.string());
            img.pixels[i] = static_cast<double>(v) * scale;
        }
        return img;
    }

    // P5: one whitespace byte after maxval, then raw samples
    // (big-endian two-byte when maxval > 255).
    const int bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * static_cast<std::size_t>(bytes_per));
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(f.gcount()) != raw.size())
        throw FormatError("load_pgm: truncated P5 data in " + path.string());
    for (std::size_t i = 0; i < count; ++i) {
        const long long v = bytes_per == 1
                                ? raw[i]
                                : (static_cast<long long>(raw[2 * i]) << 8) | raw[2 * i + 1];
        if (v > maxval)
            throw FormatError("load_pgm: sample out of range in " + path.string());
        img.pixels[i] = static_cast<double>(v) * scale;
    }
    return img;
}

GrayImage resize_bilinear(const GrayImage& img, index_t rows, index_t cols) {
    if (rows < 1 || cols < 1) throw ArgumentError("resize_bilinear: target dims must be positive");
    if (rows == img.rows && cols == img.cols) return img;

    GrayImage out;
    out.rows = rows;
    out.cols = cols;
    out.pixels.resize(static_cast<std::size_t>(rows * cols));
    const double sr = static_cast<double>(img.rows) / static_cast<double>(rows);
    const double sc = static_cast<double>(img.cols) / static_cast<double>(cols);

    for (index_t r = 0; r < rows; ++r) {
        double y = (static_cast<double>(r) + 0.5) * sr - 0.5;
        y = std::clamp(y, 0.0, static_cast<double>(img.rows - 1));
        const index_t r0 = static_cast<index_t>(y);
        const index_t r1 = std::min(r0 + 1, img.rows - 1);
        const double fy = y - static_cast<double>(r0);
        for (index_t c = 0; c < cols; ++c) {
            double x = (static_cast<double>(c) + 0.5) * sc - 0.5;
            x = std::clamp(x, 0.0, static_cast<double>(img.cols - 1));
            const index_t c0 = static_cast<index_t>(x);
            const index_t c1 = std::min(c0 + 1, img.cols - 1);
            const double fx = x - static_cast<double>(c0);
            const double top = img.at(r0, c0) * (1.0 - fx) + img.at(r0, c1) * fx;
            const double bot = img.at(r1, c0) * (1.0 - fx) + img.at(r1, c1) * fx;
            out.at(r, c) = top * (1.0 - fy) + bot * fy;
        }
    }
    return out;
}

Tensor3 ingest_images(const std::filesystem::path& directory, index_t h, index_t w) {
    if (h < 1 || w < 1) throw ArgumentError("ingest_images: target size must be positive");
    if (!std::filesystem::is_directory(directory))
        throw DataError("ingest_images: " + directory.string() + " is not a directory");

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".pgm") files.push_back(entry.path());
    }
    if (files.empty())
        throw DataError("ingest_images: no .pgm images in " + directory.string());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

    std::vector<GrayImage> slices;
    slices.reserve(files.size());
    std::string failures;
    for (const auto& file : files) {
        try {
            slices.push_back(resize_bilinear(load_pgm(file), h, w));
        } catch (const std::exception& e) {
            failures += "\n  " + file.string() + ": " + e.what();
        }
    }
    if (!failures.empty())
        throw DataError("ingest_images: unreadable images:" + failures);

    Tensor3 x(h, w, static_cast<index_t>(slices.size()));
    for (index_t k = 0; k < static_cast<index_t>(slices.size()); ++k) {
        const GrayImage& img = slices[static_cast<std::size_t>(k)];
        for (index_t j = 0; j < w; ++j)
            for (index_t i = 0; i < h; ++i) x(i, j, k) = img.at(i, j);
    }
    if (!x.all_finite()) throw DataError("ingest_images: non-finite pixel values");
    return x;
}

Tensor3 gen_random_tensor(index_t n1, index_t n2, index_t n3, std::uint64_t seed) {
    Tensor3 x(n1, n2, n3);
    SplitMix64 rng(seed);
    for (index_t i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform01();
    return x;
}

Matrix random_orthonormal(index_t rows, index_t cols, std::uint64_t seed) {
    if (cols > rows) throw ArgumentError("random_orthonormal: cols must not exceed rows");
    SplitMix64 rng(seed);
    Matrix q(rows, cols);
    for (index_t c = 0; c < cols; ++c) {
        double* qc = q.col(c);
        for (;;) {
            for (index_t r = 0; r < rows; ++r) qc[r] = 2.0 * rng.uniform01() - 1.0;
            // Modified Gram-Schmidt, two passes.
            for (int pass = 0; pass < 2; ++pass) {
                for (index_t p = 0; p < c; ++p) {
                    const double* qp = q.col(p);
                    double dot = 0.0;
                    for (index_t r = 0; r < rows; ++r) dot += qp[r] * qc[r];
                    for (index_t r = 0; r < rows; ++r) qc[r] -= dot * qp[r];
                }
            }
            double norm = 0.0;
            for (index_t r = 0; r < rows; ++r) norm += qc[r] * qc[r];
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (index_t r = 0; r < rows; ++r) qc[r] /= norm;
                break;
            }
            // Degenerate draw; take fresh values from the stream.
        }
    }
    return q;
}

Tensor3 gen_planted_tucker(index_t n1, index_t n2, index_t n3, index_t m1, index_t m2,
                           index_t m3, const std::vector<double>& spectrum, double noise_sigma,
                           std::uint64_t seed) {
    if (m1 < 1 || m1 > n1 || m2 < 1 || m2 > n2 || m3 < 1 || m3 > n3)
        throw ArgumentError("gen_planted_tucker: core dims must satisfy 1 <= m_i <= n_i");
    const index_t diag = std::min(std::min(m1, m2), m3);
    if (static_cast<index_t>(spectrum.size()) != diag)
        throw ArgumentError("gen_planted_tucker: spectrum must have min(core dims) = " +
                            std::to_string(diag) + " entries");
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (!(spectrum[i] > 0.0))
            throw ArgumentError("gen_planted_tucker: spectrum entries must be positive");
        if (i > 0 && spectrum[i] > spectrum[i - 1])
            throw ArgumentError("gen_planted_tucker: spectrum must be non-increasing");
    }
    if (noise_sigma < 0.0)
        throw ArgumentError("gen_planted_tucker: noise_sigma must be non-negative");

    const Matrix u = random_orthonormal(n1, m1, derive_seed(seed, 1));
    const Matrix v = random_orthonormal(n2, m2, derive_seed(seed, 2));
    const Matrix w = random_orthonormal(n3, m3, derive_seed(seed, 3));
    CoreTensor s(m1, m2, m3);
    for (index_t r = 0; r < diag; ++r) s(r, r, r) = spectrum[static_cast<std::size_t>(r)];

    Tensor3 x = reconstruct_hosvd(u, v, w, s);
    if (noise_sigma > 0.0) {
        const double rms = frobenius_norm(x) / std::sqrt(static_cast<double>(x.size()));
        const double sigma = noise_sigma * rms;
        SplitMix64 rng(derive_seed(seed, 4));
        for (index_t i = 0; i < x.size(); ++i) x.data()[i] += sigma * rng.gaussian();
    }
    return x;
}

} // namespace triax
