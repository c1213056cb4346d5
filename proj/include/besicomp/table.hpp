#pragma once

#include <span>
#include <string>
#include <vector>

#include "besicomp/stats.hpp"

namespace besicomp {

/// Reals serialize with 12 significant digits (%.12g): beyond every
/// tolerance in the test battery while keeping files diff-stable.
std::string format_real(double value);

/// Quote a CSV field if it contains separators or quotes.
std::string csv_escape(const std::string& field);

/// Split one CSV line, honoring double-quoted fields.
std::vector<std::string> csv_split(const std::string& line);

/// Load a reference complexity table: header "d,C_d", one row per prime,
/// strictly increasing d. Throws std::runtime_error on malformed input.
std::vector<ComplexityEntry> load_complexity_table(const std::string& path);

void save_complexity_table(const std::string& path, std::span<const ComplexityEntry> table);

/// Recompute every complexity in the table (d >= 3) and compare. Throws a
/// data-integrity std::runtime_error naming the first differing prime.
void verify_complexity_table(std::span<const ComplexityEntry> table, unsigned workers = 0);

} // namespace besicomp
