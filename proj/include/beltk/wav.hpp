#ifndef BELTK_WAV_HPP
#define BELTK_WAV_HPP

#include <string>
#include <vector>

namespace beltk {

struct WavSignal {
    int sample_rate = 0;
    std::vector<double> samples; // scaled to [-1, 1]
};

// 16-bit PCM mono RIFF/WAVE only.
WavSignal wav_read(const std::string& path);

} // namespace beltk

#endif
