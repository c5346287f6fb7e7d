#pragma once

// Text formats for fields, elements, forms and symbol lists (see docs/formats.md).

#include <string>
#include <utility>
#include <vector>

#include "qfb/field.hpp"

namespace qfb {

FieldPtr parse_field(const std::string& text);

/// Elements use +, -, *, /, ^ (integer exponent), parentheses, integers and the
/// generator names of `F`'s tower (Laurent variables, delta, delta2, ...).
Elem parse_elem(const FieldPtr& F, const std::string& text);

/// "<a, b, ...>" diagonal entries; "<<a, b>>" expands to the Pfister form;
/// an optional scalar prefix "c*<...>" multiplies every entry.
std::vector<Elem> parse_form_entries(const FieldPtr& F, const std::string& text);

/// "(a,b) + (c,d)" or "[(a,b),(c,d)]"; "[]" is the empty list.
std::vector<std::pair<Elem, Elem>> parse_symbols(const FieldPtr& F, const std::string& text);

}  // namespace qfb
