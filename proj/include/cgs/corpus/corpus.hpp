#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgs/graph/concept_graph.hpp"

namespace cgs::corpus {

struct CodePair {
    std::string id;
    std::string code;
    std::string docstring;
};

struct Triplet {
    std::string id;
    graph::ConceptGraph graph;
    std::string code_text;
    std::string query_text;
};

struct CorpusSplits {
    std::vector<Triplet> train;
    std::vector<Triplet> valid;
    std::vector<Triplet> test;
    uint64_t seed = 0;
};

struct ExtractionReport {
    int total = 0;
    int parsed = 0;
    int skipped_parse_error = 0;
    int skipped_empty_query = 0;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error("io error: " + message) {}
};

class MalformedLine : public std::runtime_error {
public:
    MalformedLine(int line_number, const std::string& message)
        : std::runtime_error("malformed line " + std::to_string(line_number) + ": " + message),
          line_number(line_number) {}
    int line_number;
};

class BadFractions : public std::runtime_error {
public:
    BadFractions(double train_frac, double valid_frac)
        : std::runtime_error("bad split fractions " + std::to_string(train_frac) + "/" +
                             std::to_string(valid_frac) +
                             ": both must be positive and sum below 1") {}
};

// Line-delimited JSON with fields "code" and "docstring"; optional "id"
// defaults to the zero-padded line number.
std::vector<CodePair> read_pairs(const std::string& path);
std::vector<CodePair> read_pairs_from_string(const std::string& content);
void write_pairs(const std::string& path, const std::vector<CodePair>& pairs);

// First sentence of the docstring with doc tags, HTML-like markup and
// surplus whitespace removed. Empty output means "skip this record".
std::string derive_query(const std::string& docstring);

std::pair<std::vector<Triplet>, ExtractionReport> build_triplets(
    const std::vector<CodePair>& pairs);

CorpusSplits split_corpus(const std::vector<Triplet>& triplets, double train_frac,
                          double valid_frac, uint64_t seed);

// Parameterized method templates inside the parser's subset, with docstrings
// that share vocabulary with the code. Deterministic under seed.
std::vector<CodePair> generate_synthetic(int n, uint64_t seed);

// Triplet files: line-delimited JSON {"id", "query", "code", "graph"}.
std::vector<Triplet> read_triplets(const std::string& path);
void write_triplets(const std::string& path, const std::vector<Triplet>& triplets);

}  // namespace cgs::corpus
