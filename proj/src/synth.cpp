#include "beltk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace beltk {

void SyntheticSpec::validate() const {
    if (classes < 2) throw std::invalid_argument("synthetic spec needs >= 2 classes");
    if (states < 1 || dim < 1 || exemplars < 1)
        throw std::invalid_argument("synthetic spec sizes must be positive");
    if (min_len < states || max_len < min_len)
        throw std::invalid_argument("sequence lengths must cover the state count");
    if (noise_scale < 0.0)
        throw std::invalid_argument("noise parameters must be nonnegative");
    if (!exemplar_jitter.empty() && static_cast<int>(exemplar_jitter.size()) != dim)
        throw std::invalid_argument("exemplar jitter must have one entry per dimension");
    for (double j : exemplar_jitter)
        if (j < 0.0) throw std::invalid_argument("noise parameters must be nonnegative");
    auto check_shape = [&](const auto& v, const char* what) {
        if (static_cast<int>(v.size()) != classes)
            throw std::invalid_argument(std::string(what) + ": wrong class count");
        for (const auto& per_class : v) {
            if (static_cast<int>(per_class.size()) != states)
                throw std::invalid_argument(std::string(what) + ": wrong state count");
            for (const auto& row : per_class)
                if (static_cast<int>(row.size()) != dim)
                    throw std::invalid_argument(std::string(what) + ": wrong dimension");
        }
    };
    check_shape(state_means, "state_means");
    check_shape(state_vars, "state_vars");
}

SyntheticSpec make_default_spec(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    // Four prototype locations on an unevenly spaced line in the first
    // dimension; classes are distinct visiting orders over them, chosen so
    // that for every ordered class pair the wrong model maps the probe onto
    // a state sequence that runs backward somewhere (uneven spacing makes
    // the nearest-state assignment of an unmodelled prototype unambiguous).
    // The per-exemplar offset lives in the third dimension only, so it
    // shifts every state of an exemplar equally without moving any
    // prototype relative to another. Frame noise in that dimension is
    // zero: within one exemplar the third coordinate is exactly constant,
    // so per-state fits agree on it exactly and likelihood ratios cancel
    // the offset, while absolute likelihoods from a single foreign
    // exemplar collapse under it.
    spec.exemplar_jitter = {0.0, 0.0, 12.0};
    const std::vector<std::vector<double>> proto = {
        {0.0, 0.0, 0.0}, {10.0, 0.0, 0.0}, {24.0, 0.0, 0.0}, {42.0, 0.0, 0.0}};
    const std::vector<std::vector<int>> orders = {
        {0, 2, 3}, {0, 3, 1}, {1, 3, 0}, {1, 3, 2}, {2, 0, 3}, {2, 3, 1}, {3, 0, 2}};
    spec.state_means.resize(spec.classes);
    spec.state_vars.resize(spec.classes);
    for (int c = 0; c < spec.classes; ++c) {
        spec.state_vars[c].assign(spec.states, {1.0, 1.0, 0.0});
        for (int s = 0; s < spec.states; ++s)
            spec.state_means[c].push_back(proto[orders[c][s]]);
    }
    return spec;
}

Corpus synth_corpus(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> length(spec.min_len, spec.max_len);

    Corpus corpus;
    for (int c = 0; c < spec.classes; ++c) {
        const std::string label = "class" + std::to_string(c);
        for (int k = 0; k < spec.exemplars; ++k) {
            const int T = length(rng);
            std::vector<double> offset(spec.dim, 0.0);
            if (!spec.exemplar_jitter.empty())
                for (int d = 0; d < spec.dim; ++d)
                    offset[d] = spec.noise_scale * spec.exemplar_jitter[d] * gauss(rng);

            // left-right path with uniform segment durations: state s holds
            // frames [floor(s T / states), floor((s + 1) T / states))
            Sequence obs(T, Observation(spec.dim));
            for (int t = 0; t < T; ++t) {
                const int state = ((t + 1) * spec.states - 1) / T;
                for (int d = 0; d < spec.dim; ++d)
                    obs[t][d] = spec.state_means[c][state][d] + offset[d] +
                                spec.noise_scale * std::sqrt(spec.state_vars[c][state][d]) *
                                    gauss(rng);
            }
            corpus.items.push_back(
                {label, label + "-ex" + std::to_string(k), std::move(obs)});
        }
    }
    return corpus;
}

} // namespace beltk
