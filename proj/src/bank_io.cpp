#include "beltk/bank_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace beltk {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json gmm_to_json(const Gmm& g) {
    json j;
    j["weights"] = g.weights();
    j["shift"] = g.shift();
    j["scale"] = g.scale();
    json comps = json::array();
    for (const auto& c : g.components()) comps.push_back({{"mean", c.mean}, {"var", c.var}});
    j["components"] = std::move(comps);
    return j;
}

Gmm gmm_from_json(const json& j) {
    std::vector<Gaussian> comps;
    for (const auto& c : j.at("components"))
        comps.push_back({c.at("mean").get<std::vector<double>>(),
                         c.at("var").get<std::vector<double>>()});
    return Gmm(j.at("weights").get<std::vector<double>>(), std::move(comps),
               j.at("shift").get<std::vector<double>>(),
               j.at("scale").get<std::vector<double>>());
}

json prob_to_json(const HmmParams& m) {
    json j;
    j["states"] = m.n;
    j["trans"] = m.trans;
    j["init"] = m.init;
    j["topo"] = m.topo;
    json em = json::array();
    for (const auto& g : m.emissions) em.push_back(gmm_to_json(g));
    j["emissions"] = std::move(em);
    return j;
}

HmmParams prob_from_json(const json& j) {
    HmmParams m;
    m.n = j.at("states").get<int>();
    m.trans = j.at("trans").get<std::vector<double>>();
    m.init = j.at("init").get<std::vector<double>>();
    m.topo = j.at("topo").get<std::vector<std::uint8_t>>();
    for (const auto& g : j.at("emissions")) m.emissions.push_back(gmm_from_json(g));
    m.validate();
    return m;
}

json belief_to_json(const BeliefHmm& m) {
    json j;
    j["states"] = m.n;
    j["prior"] = m.prior.masses();
    j["joint"] = m.joint.masses();
    json cond = json::array();
    for (std::uint32_t s = 1; s < m.transitions.table.size(); ++s)
        cond.push_back(m.transitions.table[s].masses());
    j["conditionals"] = std::move(cond);
    json em = json::array();
    for (const auto& g : m.emissions) em.push_back(gmm_to_json(g));
    j["emissions"] = std::move(em);
    return j;
}

BeliefHmm belief_from_json(const json& j) {
    const int n = j.at("states").get<int>();
    Frame frame = Frame::states(n);
    Bba prior(frame, j.at("prior").get<std::vector<double>>());
    JointBba joint(frame, frame, j.at("joint").get<std::vector<double>>());
    ConditionalBba cond{frame, frame, {}};
    cond.table.push_back(Bba::vacuous(frame));
    for (const auto& entry : j.at("conditionals"))
        cond.table.push_back(Bba(frame, entry.get<std::vector<double>>()));
    std::vector<Gmm> emissions;
    for (const auto& g : j.at("emissions")) emissions.push_back(gmm_from_json(g));
    BeliefHmm m{n, std::move(prior), std::move(joint), std::move(cond), std::move(emissions)};
    m.validate();
    return m;
}

} // namespace

void save_bank(std::ostream& out, const ModelBank& bank) {
    bank.validate();
    json j;
    j["format"] = "beltk-bank";
    j["version"] = kFormatVersion;
    j["kind"] = bank.kind == BankKind::belief ? "belief" : "prob";
    j["states"] = bank.states;
    j["mixtures"] = bank.mixtures;
    j["dim"] = bank.dim;
    json classes = json::object();
    if (bank.kind == BankKind::probabilistic) {
        for (const auto& [label, model] : bank.prob_models) classes[label] = prob_to_json(model);
    } else {
        for (const auto& [label, models] : bank.belief_models) {
            json arr = json::array();
            for (const auto& model : models) arr.push_back(belief_to_json(model));
            classes[label] = std::move(arr);
        }
    }
    j["classes"] = std::move(classes);
    out << j.dump(1) << '\n';
    if (!out.good()) throw std::runtime_error("bank write failed");
}

void save_bank_file(const std::string& path, const ModelBank& bank) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_bank(out, bank);
}

ModelBank load_bank(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("corrupted bank file: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "beltk-bank")
        throw std::runtime_error("not a beltk bank file");
    if (j.value("version", -1) != kFormatVersion)
        throw std::runtime_error("unsupported bank format version");
    for (const char* key : {"kind", "states", "mixtures", "dim", "classes"})
        if (!j.contains(key))
            throw std::runtime_error(std::string("bank file missing block: ") + key);

    ModelBank bank;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "belief")
        bank.kind = BankKind::belief;
    else if (kind == "prob")
        bank.kind = BankKind::probabilistic;
    else
        throw std::runtime_error("unknown bank kind: " + kind);
    bank.states = j.at("states").get<int>();
    bank.mixtures = j.at("mixtures").get<int>();
    bank.dim = j.at("dim").get<int>();
    try {
        for (const auto& [label, body] : j.at("classes").items()) {
            if (bank.kind == BankKind::probabilistic) {
                bank.prob_models.emplace(label, prob_from_json(body));
            } else {
                auto& models = bank.belief_models[label];
                for (const auto& entry : body) models.push_back(belief_from_json(entry));
            }
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("corrupted bank file: ") + e.what());
    }
    bank.validate();
    return bank;
}

ModelBank load_bank_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bank file: " + path);
    return load_bank(in);
}

} // namespace beltk
