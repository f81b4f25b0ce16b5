#include <array>
#include <string>
#include <vector>

#include "cgs/corpus/corpus.hpp"
#include "cgs/util/rng.hpp"

namespace cgs::corpus {

namespace {

const std::array<const char*, 12> kVerbs = {"count", "sum",    "find",  "load",  "save",  "merge",
                                            "sort",  "filter", "check", "update", "parse", "build"};

const std::array<const char*, 17> kNouns = {"item",   "record", "user",  "order",  "file",
                                            "node",   "token",  "event", "score",  "message",
                                            "account", "task",  "report", "entry", "batch",
                                            "label",  "widget"};

std::string cap(const std::string& s) {
    std::string out = s;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string doc_sentence(const std::string& verb, const std::string& noun) {
    const std::string plural = noun + "s";
    if (verb == "count") return "Count the " + plural + " and return the " + noun + " count.";
    if (verb == "sum") return "Sum the " + noun + " values across all " + plural + ".";
    if (verb == "find") return "Find the matching " + noun + " among the " + plural + ".";
    if (verb == "load") return "Load each " + noun + " from the " + plural + " store.";
    if (verb == "save") return "Save every " + noun + " to the " + plural + " store.";
    if (verb == "merge") return "Merge the " + plural + " into one merged " + noun + ".";
    if (verb == "sort") return "Sort the " + plural + " by " + noun + " order.";
    if (verb == "filter") return "Filter the " + plural + " by the " + noun + " threshold.";
    if (verb == "check") return "Check the " + noun + " against the " + plural + " limit.";
    if (verb == "update") return "Update the stored " + plural + " with fresh " + noun + " values.";
    if (verb == "parse") return "Parse the raw " + noun + " input into parsed " + plural + ".";
    return "Build a collection of " + plural + " for each " + noun + ".";
}

std::string make_code(const std::string& verb, const std::string& noun, int variant,
                      bool extra_local) {
    const std::string Noun = cap(noun);
    const std::string plural = noun + "s";
    std::string extra = extra_local ? "    int extra = 1;\n" : "";
    switch (variant) {
        case 0:
            return "import java.util.List;\n"
                   "public int " + verb + Noun + "s(List " + plural + ", int offset) {\n" + extra +
                   "    int " + noun + "Total = offset;\n"
                   "    int " + verb + "Step = " + plural + ".size();\n"
                   "    " + noun + "Total = " + noun + "Total + " + verb + "Step;\n"
                   "    return " + noun + "Total;\n"
                   "}\n";
        case 1:
            return "import java.util.List;\n"
                   "public int " + verb + Noun + "s(List " + plural + ", int limit) {\n" + extra +
                   "    int " + noun + "Total = 0;\n"
                   "    int i = 0;\n"
                   "    while (i < limit) {\n"
                   "        int " + verb + "Step = " + plural + ".indexOf(i);\n"
                   "        " + noun + "Total = " + noun + "Total + " + verb + "Step;\n"
                   "        i = i + 1;\n"
                   "    }\n"
                   "    return " + noun + "Total;\n"
                   "}\n";
        case 2:
            return "public boolean " + verb + Noun + "s(String " + noun + ", int min) {\n" + extra +
                   "    int " + verb + "Len = " + noun + ".length();\n"
                   "    if (" + verb + "Len > min) {\n"
                   "        return true;\n"
                   "    }\n"
                   "    return false;\n"
                   "}\n";
        case 3:
            return "import java.util.Map;\n"
                   "public int " + verb + Noun + "s(Map " + plural + ", int key) {\n" + extra +
                   "    int " + noun + "Found = 0;\n"
                   "    for (int i = 0; i < key; i = i + 1) {\n"
                   "        int " + verb + "Hash = " + plural + ".hashCode();\n"
                   "        " + noun + "Found = " + noun + "Found + " + verb + "Hash;\n"
                   "    }\n"
                   "    return " + noun + "Found;\n"
                   "}\n";
        default:
            return "import java.util.ArrayList;\n"
                   "public Object " + verb + Noun + "s(int count) {\n" + extra +
                   "    ArrayList " + noun + "List = new ArrayList();\n"
                   "    try {\n"
                   "        " + noun + "List.add(count);\n"
                   "    } catch (Exception error) {\n"
                   "        return " + noun + "List;\n"
                   "    }\n"
                   "    return " + noun + "List;\n"
                   "}\n";
    }
}

}  // namespace

std::vector<CodePair> generate_synthetic(int n, uint64_t seed) {
    util::Rng rng(seed);

    std::vector<std::pair<std::string, std::string>> combos;
    combos.reserve(kVerbs.size() * kNouns.size());
    for (const char* verb : kVerbs)
        for (const char* noun : kNouns) combos.emplace_back(verb, noun);
    rng.shuffle(combos);

    std::vector<CodePair> pairs;
    pairs.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const auto& [verb, noun] = combos[static_cast<size_t>(k) % combos.size()];
        int variant = static_cast<int>(rng.next_below(5));
        bool extra_local = rng.next_below(3) == 0;

        CodePair pair;
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "syn-%04d", k);
        pair.id = idbuf;
        pair.code = make_code(verb, noun, variant, extra_local);
        pair.docstring =
            doc_sentence(verb, noun) + "\n@param " + noun + "s the input\n@return the result";
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace cgs::corpus
