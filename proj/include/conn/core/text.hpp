#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace conn::text {

std::string lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Lowercased alphanumeric tokens; punctuation acts as a separator except
/// for intra-word apostrophes and hyphens.
std::vector<std::string> tokenize(std::string_view s);

bool is_stopword(std::string_view lowercase_token);
bool is_punctuation(std::string_view token);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

double parse_double(std::string_view s);  // throws std::invalid_argument
long parse_int(std::string_view s);

/// Line-oriented TSV reader. Skips blank lines and lines starting with '#'.
/// The callback receives (fields, 1-based line number).
void for_each_tsv_row(const std::string& path,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& fn);

}  // namespace conn::text
