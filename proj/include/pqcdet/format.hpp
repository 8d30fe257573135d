#pragma once

#include <string>

namespace pqcdet {

// Locale-independent number formatting for CSV/JSON output.
// Doubles are printed with 17 significant digits so values round-trip exactly.
std::string format_double(double v);
std::string format_int(long long v);

// Parses "a..b" or a single integer; throws std::invalid_argument on bad input.
std::pair<int, int> parse_int_range(const std::string& text);

}  // namespace pqcdet
