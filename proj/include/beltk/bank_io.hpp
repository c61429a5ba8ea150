#ifndef BELTK_BANK_IO_HPP
#define BELTK_BANK_IO_HPP

#include <iosfwd>
#include <string>

#include "beltk/recognizer.hpp"

namespace beltk {

// Versioned JSON container for model banks. Doubles round-trip exactly.
void save_bank(std::ostream& out, const ModelBank& bank);
void save_bank_file(const std::string& path, const ModelBank& bank);
ModelBank load_bank(std::istream& in);
ModelBank load_bank_file(const std::string& path);

} // namespace beltk

#endif
