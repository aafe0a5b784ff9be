#pragma once

#include <array>
#include <string>
#include <vector>

#include "triax/hosvd.hpp"
#include "triax/tensor.hpp"

namespace triax {

enum class Centering { AllModes, Grand, None };
enum class Prediction { Unique, NonUnique, Marginal };

std::string to_string(Centering c);
std::string to_string(Prediction p);

// Sequentially remove the mode-1, mode-2, then mode-3 fiber means; the
// result has zero mean along every mode and the map is idempotent.
Tensor3 center_all_modes(const Tensor3& x);

// Subtract the single grand mean.
Tensor3 center_grand(const Tensor3& x);

// Full spectra of the three mode Gram matrices of the centered tensor
// (the F/G/H quadratic forms with all projectors set to identity),
// sorted non-increasing, negative roundoff clamped to zero, normalized
// to sum 1. A tensor that is zero after centering is a data error
// ("degenerate spectrum").
std::array<std::vector<double>, 3> identity_spectra(const Tensor3& x,
                                                    Centering centering = Centering::AllModes);

struct SpectrumReport {
    Centering centering = Centering::AllModes;
    std::array<std::vector<double>, 3> spectra;
    TargetDims dims{};
    double tau = 0.01;
    // Relative gap (lambda_m - lambda_{m+1}) / lambda_1 per mode; modes
    // with m >= n carry no gap (quiet NaN) and do not vote.
    std::array<double, 3> gaps{};
    std::array<Prediction, 3> mode_votes{};
    Prediction prediction = Prediction::Marginal;
    bool exact_decomposition = false; // m_i >= n_i on every mode
    std::string note;
};

// Eigengap rule: a mode votes NON_UNIQUE when its relative gap at the
// cutoff is < tau, UNIQUE when >= 2*tau, MARGINAL otherwise. The overall
// prediction is NON_UNIQUE if any mode votes NON_UNIQUE, UNIQUE if all
// voting modes vote UNIQUE, MARGINAL otherwise.
SpectrumReport predict_uniqueness(const std::array<std::vector<double>, 3>& spectra,
                                  TargetDims dims, double tau);

// Convenience: centering + spectra + prediction in one call.
SpectrumReport analyze_spectrum(const Tensor3& x, TargetDims dims, double tau,
                                Centering centering = Centering::AllModes);

} // namespace triax
