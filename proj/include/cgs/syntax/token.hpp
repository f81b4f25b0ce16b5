#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cgs::syntax {

enum class TokenKind { Identifier, Keyword, Literal, Operator, Punctuation };

struct LexToken {
    TokenKind kind;
    std::string text;
    int line;    // 1-based
    int column;  // 1-based
};

class LexError : public std::runtime_error {
public:
    LexError(int line, int column, const std::string& message)
        : std::runtime_error("lex error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line(line),
          column(column),
          message(message) {}
    int line;
    int column;
    std::string message;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& expected, const std::string& found)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": expected " + expected +
                             ", found " + (found.empty() ? "end of input" : "'" + found + "'")),
          line(line),
          column(column),
          expected(expected),
          found(found) {}
    int line;
    int column;
    std::string expected;
    std::string found;
};

}  // namespace cgs::syntax
