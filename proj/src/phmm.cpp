#include "beltk/phmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace beltk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-frame emission values shifted so the best state has value 1; the
// shifts are folded back into the log-likelihood. Keeps Rabiner scaling
// while avoiding exp underflow on long mismatched sequences.
struct EmissionTable {
    std::vector<double> b;      // T*n
    std::vector<double> shift;  // T, log shift per frame
    int n = 0;
};

EmissionTable emissions(const HmmParams& model, const Sequence& obs) {
    const int n = model.n;
    EmissionTable e;
    e.n = n;
    e.b.resize(obs.size() * n);
    e.shift.resize(obs.size());
    for (std::size_t t = 0; t < obs.size(); ++t) {
        double mx = kNegInf;
        std::vector<double> lp(n);
        for (int j = 0; j < n; ++j) {
            lp[j] = model.emissions[j].log_pdf(obs[t]);
            mx = std::max(mx, lp[j]);
        }
        e.shift[t] = std::isfinite(mx) ? mx : 0.0;
        for (int j = 0; j < n; ++j)
            e.b[t * n + j] = std::isfinite(lp[j]) ? std::exp(lp[j] - e.shift[t]) : 0.0;
    }
    return e;
}

} // namespace

void HmmParams::validate() const {
    if (n < 1) throw std::invalid_argument("HmmParams: need at least one state");
    if (trans.size() != static_cast<std::size_t>(n) * n ||
        init.size() != static_cast<std::size_t>(n) ||
        topo.size() != static_cast<std::size_t>(n) * n ||
        emissions.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("HmmParams: inconsistent sizes");
    double pisum = 0.0;
    for (double p : init) {
        if (p < 0.0) throw std::invalid_argument("HmmParams: negative initial probability");
        pisum += p;
    }
    if (std::abs(pisum - 1.0) > 1e-9)
        throw std::invalid_argument("HmmParams: initial distribution must sum to 1");
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = a(i, j);
            if (v < 0.0) throw std::invalid_argument("HmmParams: negative transition");
            if (!allowed(i, j) && v != 0.0)
                throw std::invalid_argument("HmmParams: transition outside topology mask");
            row += v;
        }
        if (std::abs(row - 1.0) > 1e-9)
            throw std::invalid_argument("HmmParams: transition row must sum to 1");
    }
}

LeftRightTopology make_left_right(int n) {
    if (n < 1) throw std::invalid_argument("make_left_right: n must be >= 1");
    LeftRightTopology t;
    t.mask.assign(static_cast<std::size_t>(n) * n, 0);
    t.trans.assign(static_cast<std::size_t>(n) * n, 0.0);
    t.init.assign(n, 0.0);
    t.init[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        t.mask[i * n + i] = 1;
        if (i + 1 < n) t.mask[i * n + i + 1] = 1;
        const double p = (i + 1 < n) ? 0.5 : 1.0;
        t.trans[i * n + i] = p;
        if (i + 1 < n) t.trans[i * n + i + 1] = p;
    }
    return t;
}

ForwardResult forward(const HmmParams& model, const Sequence& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("forward: empty sequence");
    const int n = model.n;
    const std::size_t T = obs.size();
    EmissionTable e = emissions(model, obs);

    ForwardResult r;
    r.alpha.assign(T * n, 0.0);
    r.log_scale.assign(T, 0.0);
    r.log_likelihood = 0.0;

    for (std::size_t t = 0; t < T; ++t) {
        double c = 0.0;
        for (int j = 0; j < n; ++j) {
            double v;
            if (t == 0) {
                v = model.init[j] * e.b[j];
            } else {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += r.alpha[(t - 1) * n + i] * model.a(i, j);
                v = s * e.b[t * n + j];
            }
            r.alpha[t * n + j] = v;
            c += v;
        }
        if (c <= 0.0) {
            // dead end: no state can emit this frame
            r.log_likelihood = kNegInf;
            for (std::size_t u = t; u < T; ++u) r.log_scale[u] = kNegInf;
            return r;
        }
        for (int j = 0; j < n; ++j) r.alpha[t * n + j] /= c;
        r.log_scale[t] = std::log(c) + e.shift[t];
        r.log_likelihood += r.log_scale[t];
    }
    return r;
}

std::vector<double> backward(const HmmParams& model, const Sequence& obs,
                             const ForwardResult& fwd) {
    const int n = model.n;
    const std::size_t T = obs.size();
    if (!std::isfinite(fwd.log_likelihood))
        throw std::invalid_argument("backward: forward pass reported zero likelihood");
    EmissionTable e = emissions(model, obs);
    std::vector<double> beta(T * n, 0.0);
    for (int i = 0; i < n; ++i) beta[(T - 1) * n + i] = 1.0;
    for (std::size_t t = T - 1; t-- > 0;) {
        const double c = std::exp(fwd.log_scale[t + 1] - e.shift[t + 1]);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s += model.a(i, j) * e.b[(t + 1) * n + j] * beta[(t + 1) * n + j];
            beta[t * n + i] = s / c;
        }
    }
    return beta;
}

ViterbiResult viterbi(const HmmParams& model, const Sequence& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("viterbi: empty sequence");
    const int n = model.n;
    const std::size_t T = obs.size();

    std::vector<double> logb(T * n);
    for (std::size_t t = 0; t < T; ++t)
        for (int j = 0; j < n; ++j) logb[t * n + j] = model.emissions[j].log_pdf(obs[t]);

    std::vector<double> delta(T * n, kNegInf);
    std::vector<int> from(T * n, 0);
    for (int j = 0; j < n; ++j)
        delta[j] = (model.init[j] > 0.0 ? std::log(model.init[j]) : kNegInf) + logb[j];
    for (std::size_t t = 1; t < T; ++t) {
        for (int j = 0; j < n; ++j) {
            double best = kNegInf;
            int arg = 0;
            for (int i = 0; i < n; ++i) {
                const double la = model.a(i, j) > 0.0 ? std::log(model.a(i, j)) : kNegInf;
                const double v = delta[(t - 1) * n + i] + la;
                if (v > best) { // ties resolve to the lower state index
                    best = v;
                    arg = i;
                }
            }
            delta[t * n + j] = best + logb[t * n + j];
            from[t * n + j] = arg;
        }
    }
    ViterbiResult r;
    r.path.resize(T);
    double best = kNegInf;
    int arg = 0;
    for (int j = 0; j < n; ++j)
        if (delta[(T - 1) * n + j] > best) {
            best = delta[(T - 1) * n + j];
            arg = j;
        }
    r.log_score = best;
    r.path[T - 1] = arg;
    for (std::size_t t = T - 1; t-- > 0;) r.path[t] = from[(t + 1) * n + r.path[t + 1]];
    return r;
}

namespace {

// One EM update of transitions, pi, and GMM emissions from the expected
// counts of all sequences. Standardization statistics stay fixed.
void reestimate(HmmParams& model, const std::vector<Sequence>& sequences) {
    const int n = model.n;
    std::vector<double> a_num(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> a_den(n, 0.0);
    std::vector<double> pi_acc(n, 0.0);

    struct MixAcc {
        double weight = 0.0;
        std::vector<double> mean, var;
    };
    std::vector<std::vector<MixAcc>> mix(n);
    for (int j = 0; j < n; ++j) {
        mix[j].resize(model.emissions[j].mixtures());
        const int d = model.emissions[j].dim();
        for (auto& acc : mix[j]) {
            acc.mean.assign(d, 0.0);
            acc.var.assign(d, 0.0);
        }
    }

    std::vector<double> z;
    for (const auto& obs : sequences) {
        ForwardResult fwd = forward(model, obs);
        if (!std::isfinite(fwd.log_likelihood))
            throw std::runtime_error("baum_welch: sequence has zero likelihood under the model");
        std::vector<double> beta = backward(model, obs, fwd);
        EmissionTable e = emissions(model, obs);
        const std::size_t T = obs.size();

        for (int i = 0; i < n; ++i) pi_acc[i] += fwd.alpha[i] * beta[i];
        for (std::size_t t = 0; t + 1 < T; ++t) {
            const double c = std::exp(fwd.log_scale[t + 1] - e.shift[t + 1]);
            for (int i = 0; i < n; ++i) {
                const double g = fwd.alpha[t * n + i] * beta[t * n + i];
                a_den[i] += g;
                for (int j = 0; j < n; ++j) {
                    if (model.a(i, j) == 0.0) continue;
                    a_num[i * n + j] += fwd.alpha[t * n + i] * model.a(i, j) *
                                        e.b[(t + 1) * n + j] * beta[(t + 1) * n + j] / c;
                }
            }
        }
        // emission occupancies, split across mixture components
        for (std::size_t t = 0; t < T; ++t) {
            for (int j = 0; j < n; ++j) {
                const double g = fwd.alpha[t * n + j] * beta[t * n + j];
                if (g <= 0.0) continue;
                Gmm& gm = model.emissions[j];
                gm.standardize(obs[t], z);
                const int m = gm.mixtures();
                std::vector<double> lw(m);
                double mx = kNegInf;
                for (int k = 0; k < m; ++k) {
                    lw[k] = (gm.weights()[k] > 0.0 ? std::log(gm.weights()[k]) : kNegInf) +
                            gm.component_log_pdf_std(k, z);
                    mx = std::max(mx, lw[k]);
                }
                if (!std::isfinite(mx)) continue;
                double sum = 0.0;
                for (int k = 0; k < m; ++k) sum += std::exp(lw[k] - mx);
                for (int k = 0; k < m; ++k) {
                    const double r = g * std::exp(lw[k] - mx) / sum;
                    auto& acc = mix[j][k];
                    acc.weight += r;
                    for (std::size_t dd = 0; dd < z.size(); ++dd) {
                        acc.mean[dd] += r * z[dd];
                        acc.var[dd] += r * z[dd] * z[dd];
                    }
                }
            }
        }
    }

    double pisum = 0.0;
    for (double v : pi_acc) pisum += v;
    for (int i = 0; i < n; ++i) model.init[i] = pi_acc[i] / pisum;

    for (int i = 0; i < n; ++i) {
        if (a_den[i] <= 0.0) continue; // state never occupied: keep its row
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += a_num[i * n + j];
        if (row <= 0.0)
            throw std::runtime_error("baum_welch: no outgoing transition mass from state " +
                                     std::to_string(i));
        for (int j = 0; j < n; ++j) model.trans[i * n + j] = a_num[i * n + j] / row;
    }

    for (int j = 0; j < n; ++j) {
        Gmm& gm = model.emissions[j];
        double total = 0.0;
        for (const auto& acc : mix[j]) total += acc.weight;
        if (total <= 0.0) continue; // state never occupied
        for (int k = 0; k < gm.mixtures(); ++k) {
            const auto& acc = mix[j][k];
            if (acc.weight < 1e-12) continue; // dead component: keep parameters
            Gaussian& c = gm.components()[k];
            for (int dd = 0; dd < gm.dim(); ++dd) {
                const double mu = acc.mean[dd] / acc.weight;
                c.mean[dd] = mu;
                c.var[dd] = std::max(acc.var[dd] / acc.weight - mu * mu, Gmm::kVarianceFloor);
            }
        }
        double wsum = 0.0;
        for (int k = 0; k < gm.mixtures(); ++k) wsum += mix[j][k].weight;
        for (int k = 0; k < gm.mixtures(); ++k) gm.weights()[k] = mix[j][k].weight / wsum;
    }
}

} // namespace

BaumWelchResult baum_welch(HmmParams initial, const std::vector<Sequence>& sequences,
                           int max_iters, double tol) {
    initial.validate();
    if (sequences.empty()) throw std::invalid_argument("baum_welch: no training sequences");
    BaumWelchResult out{std::move(initial), {}};
    for (int iter = 0; iter < max_iters; ++iter) {
        double total = 0.0;
        for (const auto& obs : sequences) total += forward(out.model, obs).log_likelihood;
        if (!out.log_likelihood.empty() && total - out.log_likelihood.back() < tol) {
            out.log_likelihood.push_back(total);
            break;
        }
        out.log_likelihood.push_back(total);
        reestimate(out.model, sequences);
    }
    return out;
}

HmmParams init_left_right_hmm(const std::vector<Sequence>& sequences, int n, int mixtures,
                              std::uint64_t seed) {
    if (sequences.empty()) throw std::invalid_argument("init_left_right_hmm: no sequences");
    std::vector<std::vector<Observation>> chunks(n);
    for (const auto& obs : sequences) {
        const std::size_t T = obs.size();
        if (T < static_cast<std::size_t>(n))
            throw std::invalid_argument("sequence shorter than the state count");
        for (int s = 0; s < n; ++s) {
            const std::size_t lo = T * s / n;
            const std::size_t hi = T * (s + 1) / n;
            for (std::size_t t = lo; t < hi; ++t) chunks[s].push_back(obs[t]);
        }
    }
    LeftRightTopology topo = make_left_right(n);
    HmmParams model;
    model.n = n;
    model.trans = std::move(topo.trans);
    model.init = std::move(topo.init);
    model.topo = std::move(topo.mask);
    model.emissions.reserve(n);
    for (int s = 0; s < n; ++s)
        model.emissions.push_back(Gmm::fit(chunks[s], mixtures, seed + s).model);
    return model;
}

} // namespace beltk
