#ifndef BELTK_FEATURE_IO_HPP
#define BELTK_FEATURE_IO_HPP

#include <iosfwd>
#include <string>

#include "beltk/recognizer.hpp"

namespace beltk {

// Line-oriented feature text format. Per item: a header line
// "label,source,T,D" followed by T rows of D comma-separated reals printed
// at 17 significant digits; items are concatenated.
void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus_file(const std::string& path, const Corpus& corpus);
Corpus read_corpus(std::istream& in);
Corpus read_corpus_file(const std::string& path);

} // namespace beltk

#endif
