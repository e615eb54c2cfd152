#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddfb {

// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

// Fixed notation with `digits` decimals, trailing zeros kept for stable
// columns. Empty string for an absent value.
std::string format_fixed(double v, int digits = 6);
std::string format_fixed(const std::optional<double>& v, int digits = 6);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace ddfb
