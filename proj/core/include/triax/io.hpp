#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "triax/tensor.hpp"

namespace triax {

// TNS3 container: magic "TNS3", little-endian u16 version (= 1), three
// little-endian u64 dims, then n1*n2*n3 IEEE-754 binary64 little-endian
// values in canonical order (i fastest, k slowest). save/load round-trips
// bitwise; malformed magic/version/length raise FormatError naming the
// byte offset.
void save_tensor(const Tensor3& x, const std::filesystem::path& path);
Tensor3 load_tensor(const std::filesystem::path& path);

// Grayscale image, row-major pixel storage, values in [0, 255].
struct GrayImage {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<double> pixels; // pixels[r * cols + c]

    double& at(index_t r, index_t c) { return pixels[static_cast<std::size_t>(r * cols + c)]; }
    double at(index_t r, index_t c) const { return pixels[static_cast<std::size_t>(r * cols + c)]; }
};

// PGM reader: binary P5 and ASCII P2, maxval up to 65535 (values are
// rescaled to [0, 255]), '#' comments allowed in the header.
GrayImage load_pgm(const std::filesystem::path& path);

// Bilinear resize with center-aligned sampling and edge clamping:
// src_coord = (dst + 0.5) * (src_extent / dst_extent) - 0.5. Identity
// target dims pass the image through untouched.
GrayImage resize_bilinear(const GrayImage& img, index_t rows, index_t cols);

// Stack every *.pgm file of a directory (lexicographic filename order)
// into an (h, w, count) tensor, resizing each slice to h x w. Unreadable
// files are reported together in one DataError; a directory without any
// .pgm file is a DataError.
Tensor3 ingest_images(const std::filesystem::path& directory, index_t h, index_t w);

// i.i.d. uniform(0,1) entries from a SplitMix64 stream seeded with
// `seed`, filled in canonical order.
Tensor3 gen_random_tensor(index_t n1, index_t n2, index_t n3, std::uint64_t seed);

// Synthetic Tucker tensor with controlled mode spectra:
//   X = U x1 V x2 W x3 S + noise
// with random orthonormal factors (uniform(-1,1) fills orthonormalized
// by modified Gram-Schmidt; substreams derive_seed(seed, 1..3)) and a
// superdiagonal core S[r][r][r] = spectrum[r]. Each mode Gram of the
// noiseless tensor therefore has eigenvalues spectrum[r]^2 (plus zeros).
// noise_sigma is relative: i.i.d. Gaussian entries with standard
// deviation noise_sigma * rms(noiseless X) from derive_seed(seed, 4).
// spectrum must have min(core dims) positive non-increasing entries.
Tensor3 gen_planted_tucker(index_t n1, index_t n2, index_t n3, index_t m1, index_t m2,
                           index_t m3, const std::vector<double>& spectrum, double noise_sigma,
                           std::uint64_t seed);

// Random matrix with orthonormal columns (helper behind the generator,
// exposed for fixtures).
Matrix random_orthonormal(index_t rows, index_t cols, std::uint64_t seed);

} // namespace triax
