#include "beltk/recognizer.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace beltk {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

int Corpus::dim() const {
    if (items.empty() || items[0].obs.empty()) return 0;
    return static_cast<int>(items[0].obs[0].size());
}

void Corpus::validate() const {
    if (items.empty()) throw std::invalid_argument("corpus is empty");
    const int d = dim();
    for (const auto& item : items) {
        if (item.label.empty()) throw std::invalid_argument("corpus item without a label");
        if (item.obs.empty()) throw std::invalid_argument("corpus item without observations");
        for (const auto& x : item.obs)
            if (static_cast<int>(x.size()) != d)
                throw std::invalid_argument("corpus feature dimension is not uniform");
    }
}

std::vector<std::string> ModelBank::class_labels() const {
    std::vector<std::string> out;
    if (kind == BankKind::probabilistic)
        for (const auto& [label, _] : prob_models) out.push_back(label);
    else
        for (const auto& [label, _] : belief_models) out.push_back(label);
    return out;
}

void ModelBank::validate() const {
    if (kind == BankKind::probabilistic) {
        if (prob_models.empty()) throw std::invalid_argument("bank has no classes");
    } else {
        if (belief_models.empty()) throw std::invalid_argument("bank has no classes");
        for (const auto& [label, models] : belief_models)
            if (models.empty())
                throw std::invalid_argument("class without models: " + label);
    }
}

ModelBank train_bank(const Corpus& corpus, BankKind kind, int states, int mixtures,
                     std::uint64_t seed) {
    corpus.validate();
    std::map<std::string, std::vector<const CorpusItem*>> by_class;
    for (const auto& item : corpus.items) by_class[item.label].push_back(&item);

    ModelBank bank;
    bank.kind = kind;
    bank.states = states;
    bank.mixtures = mixtures;
    bank.dim = corpus.dim();

    for (const auto& [label, items] : by_class) {
        std::vector<const CorpusItem*> usable;
        for (const CorpusItem* item : items) {
            if (item->obs.size() < static_cast<std::size_t>(states)) {
                std::cerr << "warning: skipping " << item->source << " (" << label
                          << "): shorter than " << states << " frames\n";
                continue;
            }
            usable.push_back(item);
        }
        if (usable.empty())
            throw std::invalid_argument("class " + label + " has no usable sequences");
        if (kind == BankKind::belief) {
            auto& models = bank.belief_models[label];
            std::uint64_t k = 0;
            for (const CorpusItem* item : usable)
                models.push_back(train_belief_model(item->obs, states, mixtures, seed + 131 * k++));
        } else {
            std::vector<Sequence> sequences;
            for (const CorpusItem* item : usable) sequences.push_back(item->obs);
            HmmParams init = init_left_right_hmm(sequences, states, mixtures, seed);
            bank.prob_models.emplace(label, baum_welch(std::move(init), sequences).model);
        }
    }
    return bank;
}

namespace {

Recognition pick_argmax(std::vector<std::pair<std::string, double>> scores) {
    Recognition r;
    double best = kNegInf;
    for (const auto& [label, score] : scores) {
        if (score > best) { // ties keep the first label in sorted order
            best = score;
            r.label = label;
        }
    }
    if (!std::isfinite(best)) r.label.reset(); // no usable score
    r.scores = std::move(scores);
    return r;
}

} // namespace

Recognition recognize_belief(const ModelBank& bank, const Sequence& obs) {
    bank.validate();
    if (bank.kind != BankKind::belief)
        throw std::invalid_argument("recognize_belief needs a belief bank");
    std::vector<std::pair<std::string, double>> scores;
    for (const auto& [label, models] : bank.belief_models) {
        double sum = 0.0;
        for (const auto& model : models) sum += conflict_metric(model, obs);
        scores.emplace_back(label, sum / static_cast<double>(models.size()));
    }
    return pick_argmax(std::move(scores));
}

Recognition recognize_prob(const ModelBank& bank, const Sequence& obs) {
    bank.validate();
    if (bank.kind != BankKind::probabilistic)
        throw std::invalid_argument("recognize_prob needs a probabilistic bank");
    std::vector<std::pair<std::string, double>> scores;
    for (const auto& [label, model] : bank.prob_models)
        scores.emplace_back(label, forward(model, obs).log_likelihood);
    return pick_argmax(std::move(scores));
}

Recognition recognize(const ModelBank& bank, const Sequence& obs) {
    return bank.kind == BankKind::belief ? recognize_belief(bank, obs)
                                         : recognize_prob(bank, obs);
}

RecognitionReport evaluate(const ModelBank& bank, const Corpus& test) {
    test.validate();
    if (test.dim() != bank.dim)
        throw std::invalid_argument("test corpus dimension does not match the bank");
    RecognitionReport report;
    for (const auto& item : test.items) {
        Recognition r = recognize(bank, item.obs);
        const bool ok = r.label.has_value() && *r.label == item.label;
        if (ok) ++report.correct;
        report.items.push_back({item.label, std::move(r.label), std::move(r.scores)});
    }
    report.rate = static_cast<double>(report.correct) / static_cast<double>(test.items.size());
    return report;
}

} // namespace beltk
