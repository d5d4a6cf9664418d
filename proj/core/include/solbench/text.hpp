#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace solbench::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// True for `[A-Za-z_$][A-Za-z0-9_$]*`.
bool is_identifier(std::string_view s);

/// Splits an identifier on underscores, digits boundaries and camelCase humps,
/// lowercasing the parts: `payRent_v2` -> {pay, rent, v2}.
std::vector<std::string> split_identifier(std::string_view ident);

/// Lowercase and drop underscores: `Pay_Rent` -> `payrent`.
std::string fold_identifier(std::string_view ident);

/// Strips one common English inflection (ing, ed, es, s, e) when the
/// remaining stem keeps at least three characters.
std::string stem(std::string_view word);

/// Stemmed, lowercased word tokens of length >= 3 that are not stopwords.
/// Identifiers inside the text are split like `split_identifier`.
std::set<std::string> significant_tokens(std::string_view text);

bool shares_token(const std::set<std::string>& a, const std::set<std::string>& b);

/// Formats with fixed decimals, never emitting "-0.00".
std::string fixed(double value, int decimals);

}  // namespace solbench::text
