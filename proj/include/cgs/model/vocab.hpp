#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgs/corpus/corpus.hpp"

namespace cgs::model {

class EmptyCorpus : public std::runtime_error {
public:
    EmptyCorpus() : std::runtime_error("cannot build a vocabulary from an empty corpus") {}
};

// Split on camelCase boundaries, underscores and digit runs; lowercase.
std::vector<std::string> subtokenize(const std::string& identifier);

// Subtoken vocabulary with reserved PAD/UNK slots.
class Vocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;

    Vocab() = default;

    // Deterministic: indices by (frequency desc, subtoken asc); subtokens
    // below min_freq are left out and encode to UNK.
    static Vocab build(const std::vector<corpus::Triplet>& train, int min_freq = 2);

    static Vocab from_tokens(const std::vector<std::string>& tokens);  // checkpoint load

    int encode(const std::string& subtoken) const {
        auto it = index_.find(subtoken);
        return it == index_.end() ? kUnk : it->second;
    }
    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    int min_freq() const { return min_freq_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
    int min_freq_ = 2;
};

// Code text: lexed; identifiers/keywords subtokenized, literals become
// NUM/STR markers, operators and punctuation are dropped.
std::vector<std::string> tokenize_code(const std::string& code);

// Query text: split on non-alphanumeric runs, then subtokenized.
std::vector<std::string> tokenize_query(const std::string& text);

std::vector<int> encode_subtokens(const Vocab& vocab, const std::vector<std::string>& subtokens,
                                  int max_tokens);

}  // namespace cgs::model
