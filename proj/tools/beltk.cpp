// Command-line front end: feature extraction, synthetic corpora, bank
// training, recognition, and the recognition-rate benchmark sweep.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "beltk/bank_io.hpp"
#include "beltk/feature_io.hpp"
#include "beltk/mfcc.hpp"
#include "beltk/synth.hpp"
#include "beltk/wav.hpp"

namespace {

using namespace beltk;

BankKind parse_kind(const std::string& kind) {
    if (kind == "prob") return BankKind::probabilistic;
    if (kind == "belief") return BankKind::belief;
    throw std::invalid_argument("--kind must be 'prob' or 'belief'");
}

// Split one class's exemplars into `count` training items (seed-shuffled)
// and the remainder for testing.
void split_corpus(const Corpus& corpus, int count, std::uint64_t seed, bool resubstitution,
                  Corpus& train, Corpus& test) {
    std::map<std::string, std::vector<const CorpusItem*>> by_class;
    for (const auto& item : corpus.items) by_class[item.label].push_back(&item);
    train.items.clear();
    test.items.clear();
    for (auto& [label, items] : by_class) {
        if (static_cast<int>(items.size()) < count)
            throw std::invalid_argument("class " + label + " has fewer than " +
                                        std::to_string(count) + " exemplars");
        if (!resubstitution && static_cast<int>(items.size()) == count)
            throw std::invalid_argument(
                "count " + std::to_string(count) + " leaves no test data for class " + label +
                " (pass --resubstitution to evaluate on the training set)");
        std::mt19937_64 rng(seed ^ std::hash<std::string>{}(label));
        std::shuffle(items.begin(), items.end(), rng);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (static_cast<int>(i) < count)
                train.items.push_back(*items[i]);
            else
                test.items.push_back(*items[i]);
        }
    }
    if (resubstitution) test.items = train.items;
}

int cmd_extract(const std::vector<std::string>& wavs, const std::string& label,
                const std::string& output, const FeatureConfig& config) {
    Corpus corpus;
    for (const auto& path : wavs) {
        WavSignal sig = wav_read(path);
        FeatureConfig cfg = config;
        cfg.sample_rate = sig.sample_rate;
        CorpusItem item;
        item.source = std::filesystem::path(path).filename().string();
        item.label = label.empty() ? std::filesystem::path(path).stem().string() : label;
        item.obs = mfcc_extract(sig.samples, cfg);
        corpus.items.push_back(std::move(item));
    }
    write_corpus_file(output, corpus);
    std::cout << "wrote " << corpus.items.size() << " items to " << output << "\n";
    return 0;
}

int cmd_benchmark(const Corpus& corpus, const std::vector<int>& counts,
                  const std::vector<std::uint64_t>& seeds,
                  const std::vector<std::string>& kinds, bool resubstitution, int states,
                  int mixtures, const std::string& output) {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open for writing: " + output);
    out << "kind,count,seed,rate\n";
    for (const auto& kind_name : kinds) {
        const BankKind kind = parse_kind(kind_name);
        for (int count : counts) {
            for (std::uint64_t seed : seeds) {
                Corpus train, test;
                split_corpus(corpus, count, seed, resubstitution, train, test);
                ModelBank bank = train_bank(train, kind, states, mixtures, seed);
                RecognitionReport report = evaluate(bank, test);
                out << kind_name << ',' << count << ',' << seed << ',' << report.rate
                    << '\n';
                std::cerr << kind_name << " count=" << count << " seed=" << seed
                          << " rate=" << report.rate << "\n";
            }
        }
    }
    if (!out.good()) throw std::runtime_error("write failed: " + output);
    std::cout << "wrote " << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"belief-function HMM toolkit"};
    app.require_subcommand(1);

    // extract
    auto* extract = app.add_subcommand("extract", "WAV files to MFCC feature file");
    std::vector<std::string> wavs;
    std::string label, output = "features.txt";
    FeatureConfig config;
    extract->add_option("wavs", wavs, "input WAV files (16-bit PCM mono)")->required();
    extract->add_option("--label", label, "class label (default: file stem)");
    extract->add_option("-o,--output", output, "output feature file");
    extract->add_option("--frame-ms", config.frame_ms, "frame length in ms");
    extract->add_option("--hop-ms", config.hop_ms, "frame hop in ms");
    extract->add_option("--mel-filters", config.mel_filters, "mel filter count");
    extract->add_option("--coefficients", config.coefficients, "cepstral coefficients");
    extract->add_option("--preemphasis", config.preemphasis, "pre-emphasis coefficient");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    SyntheticSpec spec = make_default_spec();
    std::string synth_out = "corpus.txt";
    std::uint64_t synth_seed = 0;
    synth->add_option("-o,--output", synth_out, "output feature file");
    synth->add_option("--classes", spec.classes, "class count");
    synth->add_option("--exemplars", spec.exemplars, "exemplars per class");
    synth->add_option("--noise", spec.noise_scale, "observation noise scale");
    synth->add_option("--jitter", spec.exemplar_jitter, "per-exemplar offset scale");
    synth->add_option("--min-len", spec.min_len, "minimum sequence length");
    synth->add_option("--max-len", spec.max_len, "maximum sequence length");
    synth->add_option("--seed", synth_seed, "corpus seed");

    // train
    auto* train = app.add_subcommand("train", "train a model bank");
    std::string train_features, train_bank_path = "bank.json", kind_name = "belief";
    int states = 3, mixtures = 2;
    std::uint64_t seed = 0;
    train->add_option("features", train_features, "training feature file")->required();
    train->add_option("-o,--output", train_bank_path, "output bank file");
    train->add_option("--kind", kind_name, "prob | belief");
    train->add_option("--states", states, "HMM state count");
    train->add_option("--mixtures", mixtures, "Gaussian mixtures per state");
    train->add_option("--seed", seed, "training seed");

    // recognize
    auto* recognize_cmd = app.add_subcommand("recognize", "classify feature sequences");
    std::string rec_bank, rec_features;
    recognize_cmd->add_option("bank", rec_bank, "bank file")->required();
    recognize_cmd->add_option("features", rec_features, "feature file to classify")->required();

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "recognition-rate sweep (CSV output)");
    std::string bench_features, bench_out = "benchmark.csv";
    std::vector<int> counts;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> kinds = {"belief", "prob"};
    bool resubstitution = false;
    bench->add_option("features", bench_features,
                      "feature file (omit to use the default synthetic corpus)");
    bench->add_option("-o,--output", bench_out, "output CSV");
    bench->add_option("--counts", counts, "training exemplars per class, one run each");
    bench->add_option("--seeds", seeds, "seed list (default 0..9)");
    bench->add_option("--kinds", kinds, "recognizer kinds to sweep");
    bench->add_option("--states", states, "HMM state count");
    bench->add_option("--mixtures", mixtures, "Gaussian mixtures per state");
    bench->add_flag("--resubstitution", resubstitution, "evaluate on the training set");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) return cmd_extract(wavs, label, output, config);
        if (*synth) {
            spec.seed = synth_seed;
            // --classes trims the default class set; it cannot grow it
            if (spec.classes > static_cast<int>(spec.state_means.size())) {
                std::cerr << "error: at most " << spec.state_means.size()
                          << " classes are available\n";
                return 1;
            }
            spec.state_means.resize(spec.classes);
            spec.state_vars.resize(spec.classes);
            write_corpus_file(synth_out, synth_corpus(spec));
            std::cout << "wrote " << synth_out << "\n";
            return 0;
        }
        if (*train) {
            Corpus corpus = read_corpus_file(train_features);
            ModelBank bank = train_bank(corpus, parse_kind(kind_name), states, mixtures, seed);
            save_bank_file(train_bank_path, bank);
            std::cout << "wrote " << train_bank_path << "\n";
            return 0;
        }
        if (*recognize_cmd) {
            ModelBank bank = load_bank_file(rec_bank);
            Corpus corpus = read_corpus_file(rec_features);
            RecognitionReport report = evaluate(bank, corpus);
            for (std::size_t i = 0; i < report.items.size(); ++i) {
                const auto& item = report.items[i];
                std::cout << corpus.items[i].source << ": "
                          << (item.predicted ? *item.predicted : std::string("<no-decision>"))
                          << " (true " << item.true_label << ")\n";
            }
            std::cout << "recognition rate: " << report.rate << " (" << report.correct << "/"
                      << report.items.size() << ")\n";
            return 0;
        }
        if (*bench) {
            Corpus corpus = bench_features.empty() ? synth_corpus(make_default_spec())
                                                   : read_corpus_file(bench_features);
            if (counts.empty())
                for (int c = 1; c <= 10; ++c) counts.push_back(c);
            if (seeds.empty())
                for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
            return cmd_benchmark(corpus, counts, seeds, kinds, resubstitution, states,
                                 mixtures, bench_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
