#include "beltk/belief_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace beltk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTotalConflict = 1.0 - 1e-12;

// Mixture of conditional BBAs weighted by the masses of a (normalized)
// state BBA. A convex mixture of BBAs is itself a BBA.
Bba mix_conditionals(const Bba& weights, const ConditionalBba& cond) {
    std::vector<double> out(cond.to.num_subsets(), 0.0);
    const auto& w = weights.masses();
    for (std::uint32_t s = 1; s < w.size(); ++s) {
        if (w[s] == 0.0) continue;
        const auto& entry = cond.given(s).masses();
        for (std::uint32_t a = 0; a < entry.size(); ++a) out[a] += w[s] * entry[a];
    }
    // weights.mass(0) is zero for normalized inputs; fold any residue into
    // the empty set so mass is conserved.
    out[0] += w[0];
    return Bba(cond.to, std::move(out));
}

Bba normalized_or_vacuous(const Bba& m) {
    if (m.conflict() >= kTotalConflict) return Bba::vacuous(m.frame());
    return normalize(m);
}

std::vector<Bba> observation_bbas(const BeliefHmm& model, const Sequence& obs) {
    std::vector<Bba> out;
    out.reserve(obs.size());
    for (const auto& x : obs) out.push_back(observation_bba(model.emissions, x, model.state_frame()));
    return out;
}

JointBba average_pairwise_joint(const std::vector<Bba>& left_operands,
                                const std::vector<Bba>& obs_bbas, const Frame& frame) {
    const std::size_t T = obs_bbas.size();
    JointBba acc = JointBba::vacuous(frame, frame);
    std::vector<double> sum(acc.num_subsets(), 0.0);
    for (std::size_t t = 0; t + 1 < T; ++t) {
        JointBba l = vacuous_extend(left_operands[t], Side::left, frame);
        JointBba r = vacuous_extend(obs_bbas[t + 1], Side::right, frame);
        JointBba pair = conjunctive_combine(l, r);
        const auto& pm = pair.masses();
        for (std::size_t a = 0; a < pm.size(); ++a) sum[a] += pm[a];
    }
    double total = 0.0;
    for (double v : sum) total += v;
    for (double& v : sum) v /= total;
    return JointBba(frame, frame, std::move(sum));
}

} // namespace

const Bba& ConditionalBba::given(std::uint32_t s) const {
    if (s == 0 || s >= table.size())
        throw std::invalid_argument("conditioning subset must be a non-empty frame subset");
    return table[s];
}

void ConditionalBba::validate() const {
    if (table.size() != from.num_subsets())
        throw std::invalid_argument("conditional table must cover every subset");
    for (std::uint32_t s = 1; s < table.size(); ++s)
        if (!(table[s].frame() == to))
            throw std::invalid_argument("conditional entry on the wrong frame");
}

void BeliefHmm::validate() const {
    if (n < 1 || n > 4) throw std::invalid_argument("BeliefHmm: state count must be in [1, 4]");
    if (prior.frame().size() != n) throw std::invalid_argument("BeliefHmm: prior frame mismatch");
    if (static_cast<int>(emissions.size()) != n)
        throw std::invalid_argument("BeliefHmm: one GMM per state required");
    transitions.validate();
    if (!(transitions.from == prior.frame()) || !(transitions.to == prior.frame()))
        throw std::invalid_argument("BeliefHmm: transition frames must match the state frame");
}

ConditionalBba conditionals_from_joint(const JointBba& joint, Side side) {
    const Frame& from = side == Side::left ? joint.left() : joint.right();
    const Frame& to = side == Side::left ? joint.right() : joint.left();
    ConditionalBba cond{from, to, {}};
    cond.table.reserve(from.num_subsets());
    cond.table.push_back(Bba::vacuous(to)); // index 0 padding, never read
    for (std::uint32_t s = 1; s < from.num_subsets(); ++s)
        cond.table.push_back(condition_joint(joint, s, side));
    return cond;
}

CredalForwardResult credal_forward_bbas(const BeliefHmm& model,
                                        const std::vector<Bba>& obs_bbas) {
    model.validate();
    if (obs_bbas.empty()) throw std::invalid_argument("credal_forward: empty sequence");
    CredalForwardResult r;
    r.forward.reserve(obs_bbas.size());
    r.conflict.reserve(obs_bbas.size());
    Bba combined = conjunctive_combine_via_q(model.prior, obs_bbas[0]);
    r.conflict.push_back(combined.conflict());
    r.forward.push_back(normalized_or_vacuous(combined));
    for (std::size_t t = 1; t < obs_bbas.size(); ++t) {
        Bba predicted = mix_conditionals(r.forward.back(), model.transitions);
        Bba step = conjunctive_combine_via_q(predicted, obs_bbas[t]);
        r.conflict.push_back(step.conflict());
        r.forward.push_back(normalized_or_vacuous(step));
    }
    return r;
}

CredalForwardResult credal_forward(const BeliefHmm& model, const Sequence& obs) {
    return credal_forward_bbas(model, observation_bbas(model, obs));
}

double conflict_metric(const CredalForwardResult& fwd) {
    double sum = 0.0;
    for (double k : fwd.conflict) {
        const double p = 1.0 - k;
        if (p < 1e-300) return kNegInf;
        sum += std::log(p);
    }
    return sum / static_cast<double>(fwd.conflict.size());
}

double conflict_metric(const BeliefHmm& model, const Sequence& obs) {
    return conflict_metric(credal_forward(model, obs));
}

std::vector<Bba> credal_backward(const BeliefHmm& model, const Sequence& obs) {
    return credal_backward_bbas(model, observation_bbas(model, obs));
}

std::vector<Bba> credal_backward_bbas(const BeliefHmm& model,
                                      const std::vector<Bba>& obs_bbas) {
    model.validate();
    if (obs_bbas.empty()) throw std::invalid_argument("credal_backward: empty sequence");
    ConditionalBba reversed = conditionals_from_joint(model.joint, Side::right);
    const std::size_t T = obs_bbas.size();
    std::vector<Bba> beta(T, Bba::vacuous(model.state_frame())); // vacuous base case at T
    for (std::size_t t = T - 1; t-- > 0;) {
        Bba gamma = normalized_or_vacuous(
            conjunctive_combine_via_q(beta[t + 1], obs_bbas[t + 1]));
        beta[t] = normalized_or_vacuous(mix_conditionals(gamma, reversed));
    }
    return beta;
}

PlausibilityPath decode_plausibility(const BeliefHmm& model, const Sequence& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("decode_plausibility: empty sequence");
    const int n = model.n;
    const std::size_t T = obs.size();
    std::vector<Bba> obs_bbas = observation_bbas(model, obs);

    auto log_or_ninf = [](double v) { return v > 0.0 ? std::log(v) : kNegInf; };

    std::vector<double> log_pl_pi(n);
    {
        std::vector<double> pl = singleton_plausibilities(model.prior);
        for (int i = 0; i < n; ++i) log_pl_pi[i] = log_or_ninf(pl[i]);
    }
    std::vector<double> log_pl_a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> pl =
            singleton_plausibilities(model.transitions.given(std::uint32_t{1} << i));
        for (int j = 0; j < n; ++j) log_pl_a[i * n + j] = log_or_ninf(pl[j]);
    }

    std::vector<double> score(T * n, kNegInf);
    std::vector<int> from(T * n, 0);
    {
        std::vector<double> pl = singleton_plausibilities(obs_bbas[0]);
        for (int j = 0; j < n; ++j) score[j] = log_pl_pi[j] + log_or_ninf(pl[j]);
    }
    for (std::size_t t = 1; t < T; ++t) {
        std::vector<double> pl = singleton_plausibilities(obs_bbas[t]);
        for (int j = 0; j < n; ++j) {
            double best = kNegInf;
            int arg = 0;
            for (int i = 0; i < n; ++i) {
                const double v = score[(t - 1) * n + i] + log_pl_a[i * n + j];
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            score[t * n + j] = best + log_or_ninf(pl[j]);
            from[t * n + j] = arg;
        }
    }
    PlausibilityPath r;
    r.path.resize(T);
    double best = kNegInf;
    int arg = 0;
    for (int j = 0; j < n; ++j)
        if (score[(T - 1) * n + j] > best) {
            best = score[(T - 1) * n + j];
            arg = j;
        }
    r.log_plausibility = best;
    r.path[T - 1] = arg;
    for (std::size_t t = T - 1; t-- > 0;) r.path[t] = from[(t + 1) * n + r.path[t + 1]];
    return r;
}

TransitionEstimate estimate_transitions(const std::vector<Bba>& obs_bbas) {
    if (obs_bbas.size() < 2)
        throw std::invalid_argument("estimate_transitions: need at least two observations");
    const Frame& frame = obs_bbas[0].frame();
    if (frame.size() > 4)
        throw std::invalid_argument("estimate_transitions: state frame capped at 4");
    for (const auto& b : obs_bbas)
        if (!(b.frame() == frame))
            throw std::invalid_argument("estimate_transitions: inconsistent frames");
    JointBba joint = average_pairwise_joint(obs_bbas, obs_bbas, frame);
    ConditionalBba cond = conditionals_from_joint(joint, Side::left);
    return TransitionEstimate{std::move(joint), std::move(cond)};
}

BeliefHmm its_refine(BeliefHmm model, const Sequence& obs, double tol, int max_iters) {
    model.validate();
    std::vector<Bba> obs_bbas = observation_bbas(model, obs);
    if (obs_bbas.size() < 2) return model;

    CredalForwardResult fwd = credal_forward_bbas(model, obs_bbas);
    double metric = conflict_metric(fwd);
    BeliefHmm best = model;
    double best_metric = metric;

    const Frame& frame = model.state_frame();
    for (int iter = 0; iter < max_iters; ++iter) {
        JointBba joint = average_pairwise_joint(fwd.forward, obs_bbas, frame);
        model.transitions = conditionals_from_joint(joint, Side::left);
        model.joint = std::move(joint);
        fwd = credal_forward_bbas(model, obs_bbas);
        const double next = conflict_metric(fwd);
        if (next > best_metric) {
            best = model;
            best_metric = next;
        }
        if (std::abs(next - metric) < tol) break;
        metric = next;
    }
    return best;
}

BeliefHmm train_belief_model(const Sequence& obs, int n, int mixtures, std::uint64_t seed) {
    if (obs.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("train_belief_model: sequence shorter than the state count");
    const std::size_t T = obs.size();
    Frame frame = Frame::states(n);

    std::vector<Gmm> emissions;
    emissions.reserve(n);
    for (int s = 0; s < n; ++s) {
        const std::size_t lo = T * s / n;
        const std::size_t hi = T * (s + 1) / n;
        std::vector<Observation> chunk(obs.begin() + lo, obs.begin() + hi);
        emissions.push_back(Gmm::fit(chunk, mixtures, seed + s).model);
    }

    std::vector<Bba> obs_bbas;
    obs_bbas.reserve(T);
    for (const auto& x : obs) obs_bbas.push_back(observation_bba(emissions, x, frame));

    TransitionEstimate est =
        T >= 2 ? estimate_transitions(obs_bbas)
               : TransitionEstimate{JointBba::vacuous(frame, frame),
                                    conditionals_from_joint(JointBba::vacuous(frame, frame))};
    BeliefHmm model{n, Bba::vacuous(frame), std::move(est.joint), std::move(est.conditionals),
                    std::move(emissions)};
    return its_refine(std::move(model), obs);
}

} // namespace beltk
