#pragma once

#include <string>
#include <vector>

#include "cgs/syntax/ast.hpp"
#include "cgs/syntax/token.hpp"

namespace cgs::syntax {

// Parse a token stream as leading import statements followed by exactly one
// method declaration. Throws ParseError on anything outside the subset.
Snippet parse_snippet(const std::vector<LexToken>& tokens);

// Convenience: lex + parse.
Snippet parse_snippet(const std::string& source);

}  // namespace cgs::syntax
