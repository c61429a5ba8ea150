#ifndef BELTK_BELIEF_HMM_HPP
#define BELTK_BELIEF_HMM_HPP

#include <cstdint>
#include <vector>

#include "beltk/gmm.hpp"
#include "beltk/joint.hpp"

namespace beltk {

// Conditional BBA family: one BBA on the target frame per non-empty
// subset of the conditioning frame. table[s] is the entry for conditioning
// mask s (s >= 1); table[0] is unused padding.
struct ConditionalBba {
    Frame from;
    Frame to;
    std::vector<Bba> table;

    const Bba& given(std::uint32_t s) const;
    void validate() const;
};

// Credal HMM for one training exemplar. The time-homogeneous transition
// joint on Omega_t x Omega_{t+1} is kept alongside the conditionals derived
// from it; the backward pass conditions the same joint in the reverse
// direction.
struct BeliefHmm {
    int n = 0;
    Bba prior;                 // on the state frame, vacuous after training
    JointBba joint;            // transition joint
    ConditionalBba transitions;
    std::vector<Gmm> emissions;

    const Frame& state_frame() const { return prior.frame(); }
    void validate() const;
};

struct CredalForwardResult {
    std::vector<Bba> forward;     // per step, normalized for propagation
    std::vector<double> conflict; // per step, empty-set mass before normalization
};

// Credal forward recursion: at each step the propagated state BBA is mixed
// through the transition conditionals, combined conjunctively with the
// observation BBA, its conflict recorded, and then normalized.
CredalForwardResult credal_forward(const BeliefHmm& model, const Sequence& obs);
CredalForwardResult credal_forward_bbas(const BeliefHmm& model,
                                        const std::vector<Bba>& obs_bbas);

// Time-averaged log(1 - conflict). Zero iff no step conflicted; -inf if a
// step was totally conflicting.
double conflict_metric(const BeliefHmm& model, const Sequence& obs);
double conflict_metric(const CredalForwardResult& fwd);

// Mirror recursion using the reverse-conditioned transition joint; the base
// case at T is vacuous. Returns one BBA per step, index t in [0, T).
std::vector<Bba> credal_backward(const BeliefHmm& model, const Sequence& obs);
std::vector<Bba> credal_backward_bbas(const BeliefHmm& model,
                                      const std::vector<Bba>& obs_bbas);

struct PlausibilityPath {
    std::vector<int> path;
    double log_plausibility;
};

// Max-product decoding of the most plausible singleton state path.
PlausibilityPath decode_plausibility(const BeliefHmm& model, const Sequence& obs);

struct TransitionEstimate {
    JointBba joint;
    ConditionalBba conditionals;
};

// Transition estimation from consecutive observation BBAs: average of the
// pairwise conjunctive combinations of their vacuous extensions, then
// conditioning on every non-empty subset.
TransitionEstimate estimate_transitions(const std::vector<Bba>& obs_bbas);

// Iterative transition specialization: re-estimates the joint with the
// current credal-forward BBAs as left operands, keeps the iterate with the
// best conflict metric, stops when the metric change falls under tol.
BeliefHmm its_refine(BeliefHmm model, const Sequence& obs, double tol = 1e-4,
                     int max_iters = 20);

// Full single-exemplar training: uniform segmentation, per-state GMMs,
// transition estimation from the observation BBAs, ITS refinement,
// vacuous prior.
BeliefHmm train_belief_model(const Sequence& obs, int n, int mixtures,
                             std::uint64_t seed);

ConditionalBba conditionals_from_joint(const JointBba& joint, Side side = Side::left);

} // namespace beltk

#endif
