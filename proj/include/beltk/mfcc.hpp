#ifndef BELTK_MFCC_HPP
#define BELTK_MFCC_HPP

#include <vector>

#include "beltk/gmm.hpp"

namespace beltk {

struct FeatureConfig {
    int sample_rate = 16000;
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    int mel_filters = 26;
    int coefficients = 13; // including c0
    double preemphasis = 0.97;

    void validate() const;
    int frame_samples() const;
    int hop_samples() const;
};

// Pre-emphasis, Hamming window, magnitude spectrum, mel filterbank, log,
// DCT-II. T = 1 + floor((len - frame) / hop).
Sequence mfcc_extract(const std::vector<double>& signal, const FeatureConfig& config);

} // namespace beltk

#endif
