#include "beltk/mfcc.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace beltk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-10;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

void FeatureConfig::validate() const {
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    if (hop_ms <= 0.0 || frame_ms < hop_ms)
        throw std::invalid_argument("frame length must be >= hop > 0");
    if (mel_filters < 1) throw std::invalid_argument("need at least one mel filter");
    if (coefficients < 1 || coefficients > mel_filters)
        throw std::invalid_argument("coefficient count must be in [1, mel filters]");
    if (preemphasis < 0.0 || preemphasis >= 1.0)
        throw std::invalid_argument("pre-emphasis coefficient must be in [0, 1)");
}

int FeatureConfig::frame_samples() const {
    return static_cast<int>(std::lround(frame_ms * sample_rate / 1000.0));
}

int FeatureConfig::hop_samples() const {
    return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

Sequence mfcc_extract(const std::vector<double>& signal, const FeatureConfig& config) {
    config.validate();
    const std::size_t frame = config.frame_samples();
    const std::size_t hop = config.hop_samples();
    if (signal.size() < frame)
        throw std::invalid_argument("signal shorter than one frame");

    const std::size_t nfft = next_pow2(frame);
    const std::size_t nbins = nfft / 2 + 1;
    const int nfilt = config.mel_filters;

    // Triangular mel filterbank over the full band.
    const double mel_lo = hz_to_mel(0.0);
    const double mel_hi = hz_to_mel(config.sample_rate / 2.0);
    std::vector<double> edges(nfilt + 2);
    for (int i = 0; i < nfilt + 2; ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * i / (nfilt + 1);
        edges[i] = mel_to_hz(mel) * nfft / config.sample_rate; // fractional bin
    }
    std::vector<std::vector<double>> filters(nfilt, std::vector<double>(nbins, 0.0));
    for (int f = 0; f < nfilt; ++f) {
        for (std::size_t b = 0; b < nbins; ++b) {
            const double x = static_cast<double>(b);
            if (x > edges[f] && x < edges[f + 1])
                filters[f][b] = (x - edges[f]) / (edges[f + 1] - edges[f]);
            else if (x >= edges[f + 1] && x < edges[f + 2])
                filters[f][b] = (edges[f + 2] - x) / (edges[f + 2] - edges[f + 1]);
        }
    }

    std::vector<double> window(frame);
    for (std::size_t i = 0; i < frame; ++i)
        window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (frame - 1));

    const std::size_t T = 1 + (signal.size() - frame) / hop;
    Sequence out(T);
    std::vector<std::complex<double>> buf(nfft);
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t start = t * hop;
        // pre-emphasis stays inside the frame so frames depend only on
        // their own samples
        for (std::size_t i = 0; i < frame; ++i) {
            const double prev = (i > 0) ? signal[start + i - 1] : signal[start];
            buf[i] = (signal[start + i] - config.preemphasis * prev) * window[i];
        }
        for (std::size_t i = frame; i < nfft; ++i) buf[i] = 0.0;
        fft(buf);
        std::vector<double> mag(nbins);
        for (std::size_t b = 0; b < nbins; ++b) mag[b] = std::abs(buf[b]);

        std::vector<double> logmel(nfilt);
        for (int f = 0; f < nfilt; ++f) {
            double e = 0.0;
            for (std::size_t b = 0; b < nbins; ++b) e += filters[f][b] * mag[b];
            logmel[f] = std::log(std::max(e, kLogFloor));
        }
        std::vector<double>& c = out[t];
        c.resize(config.coefficients);
        for (int k = 0; k < config.coefficients; ++k) {
            double s = 0.0;
            for (int f = 0; f < nfilt; ++f)
                s += logmel[f] * std::cos(kPi * k * (f + 0.5) / nfilt);
            c[k] = s * std::sqrt(2.0 / nfilt) * (k == 0 ? std::numbers::sqrt2 / 2.0 : 1.0);
        }
    }
    return out;
}

} // namespace beltk
