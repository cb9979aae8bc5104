#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ontomesh {

/// Lowercases ASCII letters and strips ASCII non-alphanumerics. Bytes outside
/// the ASCII range (UTF-8 continuations etc.) are kept as-is.
std::string normalize_label(std::string_view label);

/// Splits a label into lowercase word tokens at non-alphanumerics and at
/// lower-to-upper camel-case boundaries: "SteelFactory" -> {"steel","factory"}.
std::vector<std::string> split_label_tokens(std::string_view label);

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

} // namespace ontomesh
