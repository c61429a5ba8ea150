#ifndef BELTK_SYNTH_HPP
#define BELTK_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "beltk/recognizer.hpp"

namespace beltk {

// Desk-scale synthetic corpus: each class is a left-right progression
// through per-state Gaussian emitters. Every exemplar additionally carries
// a class-preserving random offset (per-dimension std, scaled by
// noise_scale) so exemplars of one class vary more than frames within one
// exemplar.
struct SyntheticSpec {
    int classes = 7;
    int states = 3;
    int dim = 3;
    int exemplars = 15;
    int min_len = 30;
    int max_len = 45;
    double noise_scale = 1.0;
    std::vector<double> exemplar_jitter; // per-dim offset std; empty = none
    std::uint64_t seed = 0;
    // [class][state][dim]; both must be filled (see make_default_spec)
    std::vector<std::vector<std::vector<double>>> state_means;
    std::vector<std::vector<std::vector<double>>> state_vars;

    void validate() const;
};

// The default experiment configuration: 7 classes x 15 exemplars. All
// classes share one pool of well-separated state prototypes and differ
// only in visiting order, and every exemplar carries a strong random
// offset along the dimension the prototypes do not use. Likelihood ratios
// cancel that offset; absolute likelihoods do not.
SyntheticSpec make_default_spec(std::uint64_t seed = 0);

Corpus synth_corpus(const SyntheticSpec& spec);

} // namespace beltk

#endif
