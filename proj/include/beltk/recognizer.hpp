#ifndef BELTK_RECOGNIZER_HPP
#define BELTK_RECOGNIZER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beltk/belief_hmm.hpp"
#include "beltk/phmm.hpp"

namespace beltk {

struct CorpusItem {
    std::string label;
    std::string source;
    Sequence obs;
};

struct Corpus {
    std::vector<CorpusItem> items;
    int dim() const;
    void validate() const;
};

enum class BankKind { probabilistic, belief };

// One probabilistic HMM per class, or one belief HMM per training exemplar
// grouped by class.
struct ModelBank {
    BankKind kind = BankKind::probabilistic;
    int states = 0;
    int mixtures = 0;
    int dim = 0;
    std::map<std::string, HmmParams> prob_models;
    std::map<std::string, std::vector<BeliefHmm>> belief_models;

    std::vector<std::string> class_labels() const;
    void validate() const;
};

ModelBank train_bank(const Corpus& corpus, BankKind kind, int states, int mixtures,
                     std::uint64_t seed);

struct Recognition {
    std::optional<std::string> label; // empty = no decision (all scores -inf)
    std::vector<std::pair<std::string, double>> scores;
};

// Belief bank: per class, the arithmetic mean of the conflict metric over
// that class's models; argmax wins, ties to the first label in sorted order.
Recognition recognize_belief(const ModelBank& bank, const Sequence& obs);
// Probabilistic bank: argmax of the forward log-likelihood.
Recognition recognize_prob(const ModelBank& bank, const Sequence& obs);
Recognition recognize(const ModelBank& bank, const Sequence& obs);

struct RecognitionReport {
    struct Item {
        std::string true_label;
        std::optional<std::string> predicted;
        std::vector<std::pair<std::string, double>> scores;
    };
    std::vector<Item> items;
    int correct = 0;
    double rate = 0.0;
};

RecognitionReport evaluate(const ModelBank& bank, const Corpus& test);

} // namespace beltk

#endif
