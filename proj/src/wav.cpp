#include "beltk/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace beltk {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
    return std::uint16_t(p[0] | p[1] << 8);
}

} // namespace

WavSignal wav_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open WAV file: " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("not a RIFF/WAVE file: " + path);

    int sample_rate = 0;
    int channels = 0;
    int bits = 0;
    int format = 0;
    bool have_fmt = false;
    const unsigned char* pcm = nullptr;
    std::size_t pcm_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const char* id = reinterpret_cast<const char*>(data.data() + pos);
        const std::uint32_t len = read_u32(data.data() + pos + 4);
        if (pos + 8 + len > data.size())
            throw std::runtime_error("truncated WAV chunk in " + path);
        const unsigned char* body = data.data() + pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw std::runtime_error("malformed fmt chunk in " + path);
            format = read_u16(body);
            channels = read_u16(body + 2);
            sample_rate = static_cast<int>(read_u32(body + 4));
            bits = read_u16(body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            pcm = body;
            pcm_len = len;
        }
        pos += 8 + len + (len & 1); // chunks are word-aligned
    }
    if (!have_fmt || pcm == nullptr)
        throw std::runtime_error("WAV file missing fmt or data chunk: " + path);
    if (format != 1 || bits != 16)
        throw std::runtime_error("unsupported WAV encoding (need 16-bit PCM): " + path);
    if (channels != 1)
        throw std::runtime_error("unsupported channel count (need mono): " + path);

    WavSignal sig;
    sig.sample_rate = sample_rate;
    sig.samples.resize(pcm_len / 2);
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const std::int16_t v =
            static_cast<std::int16_t>(std::uint16_t(pcm[2 * i] | pcm[2 * i + 1] << 8));
        sig.samples[i] = static_cast<double>(v) / 32768.0;
    }
    return sig;
}

} // namespace beltk
