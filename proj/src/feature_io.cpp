#include "beltk/feature_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beltk {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("malformed number in feature file: " + s);
    return v;
}

long parse_long(const std::string& s) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw std::runtime_error("malformed count in feature file header: " + s);
    return v;
}

} // namespace

void write_corpus(std::ostream& out, const Corpus& corpus) {
    corpus.validate();
    char buf[64];
    for (const auto& item : corpus.items) {
        out << item.label << ',' << item.source << ',' << item.obs.size() << ','
            << item.obs[0].size() << '\n';
        for (const auto& row : item.obs) {
            for (std::size_t d = 0; d < row.size(); ++d) {
                std::snprintf(buf, sizeof buf, "%.17g", row[d]);
                out << (d ? "," : "") << buf;
            }
            out << '\n';
        }
    }
}

void write_corpus_file(const std::string& path, const Corpus& corpus) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_corpus(out, corpus);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

Corpus read_corpus(std::istream& in) {
    Corpus corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto header = split(line, ',');
        if (header.size() != 4)
            throw std::runtime_error("malformed feature header: " + line);
        CorpusItem item;
        item.label = header[0];
        item.source = header[1];
        const long T = parse_long(header[2]);
        const long D = parse_long(header[3]);
        if (T < 1 || D < 1) throw std::runtime_error("malformed feature header: " + line);
        item.obs.reserve(T);
        for (long t = 0; t < T; ++t) {
            if (!std::getline(in, line))
                throw std::runtime_error("feature file truncated inside " + item.source);
            const auto cells = split(line, ',');
            if (static_cast<long>(cells.size()) != D)
                throw std::runtime_error("row length mismatch in " + item.source);
            Observation row(D);
            for (long d = 0; d < D; ++d) row[d] = parse_double(cells[d]);
            item.obs.push_back(std::move(row));
        }
        corpus.items.push_back(std::move(item));
    }
    corpus.validate(); // also rejects D mismatch across items
    return corpus;
}

Corpus read_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature file: " + path);
    return read_corpus(in);
}

} // namespace beltk
