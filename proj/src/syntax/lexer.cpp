#include "cgs/syntax/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace cgs::syntax {

namespace {

const std::unordered_set<std::string>& keyword_set() {
    static const std::unordered_set<std::string> kw = {
        "abstract", "assert",     "boolean",   "break",      "byte",   "case",
        "catch",    "char",       "class",     "const",      "continue", "default",
        "do",       "double",     "else",      "enum",       "extends", "final",
        "finally",  "float",      "for",       "goto",       "if",     "implements",
        "import",   "instanceof", "int",       "interface",  "long",   "native",
        "new",      "package",    "private",   "protected",  "public", "return",
        "short",    "static",     "strictfp",  "super",      "switch", "synchronized",
        "this",     "throw",      "throws",    "transient",  "try",    "void",
        "volatile", "while"};
    return kw;
}

// true/false/null are lexed as literals so the parser builds LiteralExpr for them.
bool is_word_literal(const std::string& word) {
    return word == "true" || word == "false" || word == "null";
}

// Multi-character operators, longest first for maximal munch.
const std::array<const char*, 26>& multi_ops() {
    static const std::array<const char*, 26> ops = {
        ">>>=", "<<=", ">>=", ">>>", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
        "-=",   "*=",  "/=",  "%=",  "&=", "|=", "^=", "->", "::", "<<", ">>", "?",  ":"};
    return ops;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool is_ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Cursor {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= src.size(); }
    char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }
    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
};

}  // namespace

bool is_keyword(const std::string& word) { return keyword_set().count(word) > 0; }

std::vector<LexToken> lex(const std::string& source) {
    std::vector<LexToken> out;
    Cursor c{source};

    while (!c.done()) {
        char ch = c.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            c.advance();
            continue;
        }
        // Comments
        if (ch == '/' && c.peek(1) == '/') {
            while (!c.done() && c.peek() != '\n') c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '*') {
            int sl = c.line, sc = c.col;
            c.advance();
            c.advance();
            bool closed = false;
            while (!c.done()) {
                if (c.peek() == '*' && c.peek(1) == '/') {
                    c.advance();
                    c.advance();
                    closed = true;
                    break;
                }
                c.advance();
            }
            if (!closed) throw LexError(sl, sc, "unterminated block comment");
            continue;
        }

        int line = c.line, col = c.col;

        if (is_ident_start(ch)) {
            std::string word;
            while (!c.done() && is_ident_part(c.peek())) {
                word.push_back(c.peek());
                c.advance();
            }
            TokenKind kind = TokenKind::Identifier;
            if (is_word_literal(word))
                kind = TokenKind::Literal;
            else if (is_keyword(word))
                kind = TokenKind::Keyword;
            out.push_back({kind, word, line, col});
            continue;
        }

        if (is_digit(ch)) {
            std::string num;
            if (ch == '0' && (c.peek(1) == 'x' || c.peek(1) == 'X')) {
                num += c.peek();
                c.advance();
                num += c.peek();
                c.advance();
                while (!c.done() && std::isxdigit(static_cast<unsigned char>(c.peek()))) {
                    num.push_back(c.peek());
                    c.advance();
                }
            } else {
                while (!c.done() && is_digit(c.peek())) {
                    num.push_back(c.peek());
                    c.advance();
                }
                if (c.peek() == '.' && is_digit(c.peek(1))) {
                    num.push_back('.');
                    c.advance();
                    while (!c.done() && is_digit(c.peek())) {
                        num.push_back(c.peek());
                        c.advance();
                    }
                }
                if (c.peek() == 'e' || c.peek() == 'E') {
                    size_t save = c.pos;
                    std::string exp;
                    exp.push_back(c.peek());
                    c.advance();
                    if (c.peek() == '+' || c.peek() == '-') {
                        exp.push_back(c.peek());
                        c.advance();
                    }
                    if (is_digit(c.peek())) {
                        while (!c.done() && is_digit(c.peek())) {
                            exp.push_back(c.peek());
                            c.advance();
                        }
                        num += exp;
                    } else {
                        // not an exponent; rewind
                        while (c.pos > save) {
                            --c.pos;
                            --c.col;
                        }
                    }
                }
            }
            // Type suffix
            char sfx = c.peek();
            if (sfx == 'f' || sfx == 'F' || sfx == 'd' || sfx == 'D' || sfx == 'l' || sfx == 'L') {
                num.push_back(sfx);
                c.advance();
            }
            out.push_back({TokenKind::Literal, num, line, col});
            continue;
        }

        if (ch == '"' || ch == '\'') {
            char quote = ch;
            std::string text;
            text.push_back(quote);
            c.advance();
            bool closed = false;
            while (!c.done()) {
                char k = c.peek();
                if (k == '\n') break;
                if (k == '\\') {
                    text.push_back(k);
                    c.advance();
                    if (c.done()) break;
                    text.push_back(c.peek());
                    c.advance();
                    continue;
                }
                text.push_back(k);
                c.advance();
                if (k == quote) {
                    closed = true;
                    break;
                }
            }
            if (!closed)
                throw LexError(line, col, quote == '"' ? "unterminated string literal"
                                                       : "unterminated character literal");
            out.push_back({TokenKind::Literal, text, line, col});
            continue;
        }

        // Operators, longest match first
        bool matched = false;
        for (const char* op : multi_ops()) {
            size_t n = std::string::traits_type::length(op);
            if (source.compare(c.pos, n, op) == 0) {
                out.push_back({TokenKind::Operator, std::string(op), line, col});
                for (size_t i = 0; i < n; ++i) c.advance();
                matched = true;
                break;
            }
        }
        if (matched) continue;

        if (std::string("+-*/%=<>!&|^~").find(ch) != std::string::npos) {
            out.push_back({TokenKind::Operator, std::string(1, ch), line, col});
            c.advance();
            continue;
        }
        if (std::string("(){}[];,.@").find(ch) != std::string::npos) {
            out.push_back({TokenKind::Punctuation, std::string(1, ch), line, col});
            c.advance();
            continue;
        }

        throw LexError(line, col, std::string("illegal character '") + ch + "'");
    }
    return out;
}

}  // namespace cgs::syntax
