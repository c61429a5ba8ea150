#ifndef BELTK_PHMM_HPP
#define BELTK_PHMM_HPP

#include <cstdint>
#include <vector>

#include "beltk/gmm.hpp"

namespace beltk {

// Classical HMM with GMM emissions. Transition rows respect a boolean
// topology mask (left-right by default); masked-out entries stay zero
// through training.
struct HmmParams {
    int n = 0;
    std::vector<double> trans;        // n*n row-major
    std::vector<double> init;         // n
    std::vector<std::uint8_t> topo;   // n*n, 1 = transition allowed
    std::vector<Gmm> emissions;       // n

    double a(int i, int j) const { return trans[i * n + j]; }
    bool allowed(int i, int j) const { return topo[i * n + j] != 0; }
    void validate() const;
};

// Self-loop and single forward step; pi concentrated on the first state;
// uniform transition probabilities over the allowed entries.
struct LeftRightTopology {
    std::vector<std::uint8_t> mask;
    std::vector<double> trans;
    std::vector<double> init;
};
LeftRightTopology make_left_right(int n);

struct ForwardResult {
    double log_likelihood;
    std::vector<double> alpha;      // T*n, scaled so each row sums to 1
    std::vector<double> log_scale;  // T, log of each step's normalizer
};

ForwardResult forward(const HmmParams& model, const Sequence& obs);

// Scaled backward pass sharing the forward scale factors, so that
// sum_i alpha_t(i) * beta_t(i) == 1 at every t.
std::vector<double> backward(const HmmParams& model, const Sequence& obs,
                             const ForwardResult& fwd);

struct ViterbiResult {
    std::vector<int> path;
    double log_score;
};

ViterbiResult viterbi(const HmmParams& model, const Sequence& obs);

struct BaumWelchResult {
    HmmParams model;
    std::vector<double> log_likelihood; // total over sequences, per iteration
};

BaumWelchResult baum_welch(HmmParams initial, const std::vector<Sequence>& sequences,
                           int max_iters = 50, double tol = 1e-4);

// Flat-start model: uniform-duration segmentation of each sequence feeds
// per-state GMM fits; transitions and pi from make_left_right.
HmmParams init_left_right_hmm(const std::vector<Sequence>& sequences, int n, int mixtures,
                              std::uint64_t seed);

} // namespace beltk

#endif
