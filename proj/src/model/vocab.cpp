#include "cgs/model/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "cgs/syntax/lexer.hpp"

namespace cgs::model {

std::vector<std::string> subtokenize(const std::string& identifier) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            out.push_back(current);
            current.clear();
        }
    };
    auto kind_of = [](char c) {
        if (std::isdigit(static_cast<unsigned char>(c))) return 2;
        if (std::isalpha(static_cast<unsigned char>(c))) return 1;
        return 0;
    };
    char prev = '\0';
    for (char c : identifier) {
        if (kind_of(c) == 0) {  // separators: _, $, anything else
            flush();
            prev = c;
            continue;
        }
        bool camel = std::isupper(static_cast<unsigned char>(c)) &&
                     std::islower(static_cast<unsigned char>(prev));
        bool digit_boundary = prev != '\0' && kind_of(c) != kind_of(prev) &&
                              kind_of(prev) != 0;
        if (camel || digit_boundary) flush();
        current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        prev = c;
    }
    flush();
    return out;
}

std::vector<std::string> tokenize_code(const std::string& code) {
    std::vector<std::string> out;
    for (const auto& tok : syntax::lex(code)) {
        switch (tok.kind) {
            case syntax::TokenKind::Identifier:
            case syntax::TokenKind::Keyword: {
                for (auto& s : subtokenize(tok.text)) out.push_back(std::move(s));
                break;
            }
            case syntax::TokenKind::Literal: {
                char first = tok.text.empty() ? '\0' : tok.text[0];
                if (first == '"' || first == '\'')
                    out.push_back("STR");
                else if (std::isdigit(static_cast<unsigned char>(first)))
                    out.push_back("NUM");
                else  // true/false/null
                    for (auto& s : subtokenize(tok.text)) out.push_back(std::move(s));
                break;
            }
            default:
                break;  // operators and punctuation carry no concept names
        }
    }
    return out;
}

std::vector<std::string> tokenize_query(const std::string& text) {
    std::vector<std::string> out;
    std::string word;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            word.push_back(c);
        } else if (!word.empty()) {
            for (auto& s : subtokenize(word)) out.push_back(std::move(s));
            word.clear();
        }
    }
    if (!word.empty())
        for (auto& s : subtokenize(word)) out.push_back(std::move(s));
    return out;
}

Vocab Vocab::build(const std::vector<corpus::Triplet>& train, int min_freq) {
    if (train.empty()) throw EmptyCorpus();
    std::map<std::string, int> freq;
    auto count = [&](const std::vector<std::string>& subtokens) {
        for (const auto& s : subtokens) ++freq[s];
    };
    for (const auto& t : train) {
        count(tokenize_code(t.code_text));
        count(tokenize_query(t.query_text));
        for (const auto& node : t.graph.nodes) count(subtokenize(node.name));
    }

    std::vector<std::pair<std::string, int>> entries;
    for (const auto& [token, n] : freq)
        if (n >= min_freq) entries.emplace_back(token, n);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab v;
    v.min_freq_ = min_freq;
    v.tokens_ = {"<pad>", "<unk>"};
    for (auto& [token, n] : entries) v.tokens_.push_back(std::move(token));
    for (int i = 0; i < static_cast<int>(v.tokens_.size()); ++i) v.index_[v.tokens_[i]] = i;
    return v;
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens) {
    Vocab v;
    v.tokens_ = tokens;
    for (int i = 0; i < static_cast<int>(v.tokens_.size()); ++i) v.index_[v.tokens_[i]] = i;
    return v;
}

std::vector<int> encode_subtokens(const Vocab& vocab, const std::vector<std::string>& subtokens,
                                  int max_tokens) {
    std::vector<int> ids;
    for (const auto& s : subtokens) {
        if (static_cast<int>(ids.size()) >= max_tokens) break;
        ids.push_back(vocab.encode(s));
    }
    if (ids.empty()) ids.push_back(Vocab::kUnk);
    return ids;
}

}  // namespace cgs::model
