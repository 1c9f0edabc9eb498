#pragma once

#include <string_view>

namespace semcorpus {

/// True for a currently assigned ISO 3166-1 alpha-2 code.
bool is_iso_country(std::string_view code);

/// True if the string has the shape of a country code ([A-Z]{2}).
bool is_country_code_shape(std::string_view code);

}  // namespace semcorpus
