#pragma once

#include <string>
#include <vector>

#include "cgs/syntax/token.hpp"

namespace cgs::syntax {

// Tokenize Java-subset source. Whitespace and comments are discarded.
// Throws LexError on unterminated strings/comments and illegal characters.
std::vector<LexToken> lex(const std::string& source);

bool is_keyword(const std::string& word);

}  // namespace cgs::syntax
