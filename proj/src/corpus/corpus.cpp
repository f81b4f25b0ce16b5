#include "cgs/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cgs/syntax/parser.hpp"
#include "cgs/util/rng.hpp"

namespace cgs::corpus {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::string padded_id(int line_number) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", line_number);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CodePair> read_pairs_from_string(const std::string& content) {
    std::vector<CodePair> pairs;
    std::istringstream in(content);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw MalformedLine(line_number, "not a JSON object");
        }
        if (!doc.is_object() || !doc.contains("code") || !doc["code"].is_string() ||
            !doc.contains("docstring") || !doc["docstring"].is_string())
            throw MalformedLine(line_number, "requires string fields 'code' and 'docstring'");
        CodePair pair;
        pair.id = doc.contains("id") && doc["id"].is_string() ? doc["id"].get<std::string>()
                                                              : padded_id(line_number);
        pair.code = doc["code"].get<std::string>();
        pair.docstring = doc["docstring"].get<std::string>();
        if (trim(pair.code).empty() || trim(pair.docstring).empty())
            throw MalformedLine(line_number, "'code' and 'docstring' must be non-empty");
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<CodePair> read_pairs(const std::string& path) {
    return read_pairs_from_string(read_file(path));
}

void write_pairs(const std::string& path, const std::vector<CodePair>& pairs) {
    auto out = open_out(path);
    for (const auto& p : pairs) {
        nlohmann::ordered_json doc;
        doc["id"] = p.id;
        doc["code"] = p.code;
        doc["docstring"] = p.docstring;
        out << doc.dump() << "\n";
    }
}

std::string derive_query(const std::string& docstring) {
    // Drop doc-tag lines and trailing @... segments.
    std::string kept;
    std::istringstream in(docstring);
    std::string line;
    bool in_tags = false;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty() && t[0] == '@') in_tags = true;
        if (in_tags) continue;
        size_t at = line.find(" @");
        if (at != std::string::npos) line = line.substr(0, at);
        kept += line;
        kept += "\n";
    }

    // Strip HTML-like tags.
    std::string untagged;
    bool in_tag = false;
    for (char c : kept) {
        if (c == '<') {
            in_tag = true;
            continue;
        }
        if (c == '>') {
            in_tag = false;
            continue;
        }
        if (!in_tag) untagged.push_back(c);
    }

    // First sentence: up to a period followed by whitespace/end, or a blank line.
    std::string sentence;
    bool started = false;
    int newline_run = 0;
    for (size_t i = 0; i < untagged.size(); ++i) {
        char c = untagged[i];
        if (c == '\n') {
            ++newline_run;
            if (started && newline_run >= 2) break;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            newline_run = 0;
            started = true;
        }
        sentence.push_back(c);
        if (c == '.') {
            char next = i + 1 < untagged.size() ? untagged[i + 1] : ' ';
            if (std::isspace(static_cast<unsigned char>(next))) break;
        }
    }

    // Collapse whitespace runs.
    std::string out;
    bool pending_space = false;
    for (char c : sentence) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::pair<std::vector<Triplet>, ExtractionReport> build_triplets(
    const std::vector<CodePair>& pairs) {
    std::vector<Triplet> triplets;
    ExtractionReport report;
    report.total = static_cast<int>(pairs.size());
    for (const auto& pair : pairs) {
        syntax::Snippet snippet;
        try {
            snippet = syntax::parse_snippet(pair.code);
        } catch (const syntax::LexError&) {
            ++report.skipped_parse_error;
            continue;
        } catch (const syntax::ParseError&) {
            ++report.skipped_parse_error;
            continue;
        }
        std::string query = derive_query(pair.docstring);
        if (query.empty()) {
            ++report.skipped_empty_query;
            continue;
        }
        Triplet t;
        t.id = pair.id;
        t.graph = graph::extract_graph(snippet);
        t.code_text = pair.code;
        t.query_text = std::move(query);
        triplets.push_back(std::move(t));
        ++report.parsed;
    }
    return {std::move(triplets), report};
}

CorpusSplits split_corpus(const std::vector<Triplet>& triplets, double train_frac,
                          double valid_frac, uint64_t seed) {
    if (train_frac <= 0.0 || valid_frac <= 0.0 || train_frac + valid_frac >= 1.0)
        throw BadFractions(train_frac, valid_frac);
    const size_t n = triplets.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    util::Rng rng(seed);
    rng.shuffle(order);

    const size_t n_train = static_cast<size_t>(static_cast<double>(n) * train_frac);
    const size_t n_valid = static_cast<size_t>(static_cast<double>(n) * valid_frac);

    CorpusSplits splits;
    splits.seed = seed;
    for (size_t i = 0; i < n; ++i) {
        const Triplet& t = triplets[order[i]];
        if (i < n_train)
            splits.train.push_back(t);
        else if (i < n_train + n_valid)
            splits.valid.push_back(t);
        else
            splits.test.push_back(t);
    }
    return splits;
}

std::vector<Triplet> read_triplets(const std::string& path) {
    std::vector<Triplet> triplets;
    std::istringstream in(read_file(path));
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw MalformedLine(line_number, "not a JSON object");
        }
        if (!doc.contains("id") || !doc.contains("query") || !doc.contains("code") ||
            !doc.contains("graph"))
            throw MalformedLine(line_number, "requires 'id', 'query', 'code' and 'graph'");
        Triplet t;
        t.id = doc["id"].get<std::string>();
        t.query_text = doc["query"].get<std::string>();
        t.code_text = doc["code"].get<std::string>();
        t.graph = graph::graph_from_json(doc["graph"].dump());
        triplets.push_back(std::move(t));
    }
    return triplets;
}

void write_triplets(const std::string& path, const std::vector<Triplet>& triplets) {
    auto out = open_out(path);
    for (const auto& t : triplets) {
        nlohmann::ordered_json doc;
        doc["id"] = t.id;
        doc["query"] = t.query_text;
        doc["code"] = t.code_text;
        doc["graph"] = nlohmann::ordered_json::parse(graph::graph_to_json(t.graph));
        out << doc.dump() << "\n";
    }
}

}  // namespace cgs::corpus
