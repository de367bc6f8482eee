#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bridgescope/similarity.hpp"

using namespace bs;

namespace {

// Independent oracle, written from the definition: case-fold, pad with two
// leading and one trailing space, collect the distinct 3-grams, Jaccard.
double oracle_trigram(std::string a, std::string b) {
    auto fold = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return s;
    };
    a = fold(a);
    b = fold(b);
    if (a == b) return 1.0;
    auto grams = [](const std::string& s) {
        std::set<std::string> out;
        std::string padded = "  " + s + " ";
        for (size_t i = 0; i + 3 <= padded.size(); ++i) out.insert(padded.substr(i, 3));
        return out;
    };
    std::set<std::string> ga = grams(a), gb = grams(b);
    if (ga.empty() && gb.empty()) return 1.0;
    size_t common = 0;
    for (const auto& g : ga) common += gb.count(g);
    size_t unions = ga.size() + gb.size() - common;
    return unions == 0 ? 0.0 : static_cast<double>(common) / unions;
}

}  // namespace

TEST_CASE("trigram similarity matches the set-based oracle on random strings") {
    std::mt19937 rng(41);
    const std::string alphabet = "abcde ";
    auto random_string = [&] {
        std::string s;
        size_t len = rng() % 12;
        for (size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        return s;
    };
    for (int trial = 0; trial < 2000; ++trial) {
        std::string a = random_string(), b = random_string();
        CAPTURE(a);
        CAPTURE(b);
        CHECK(trigram_similarity(a, b) == doctest::Approx(oracle_trigram(a, b)));
    }
}

TEST_CASE("exact matches score 1.0 regardless of case") {
    CHECK(trigram_similarity("women", "women") == 1.0);
    CHECK(trigram_similarity("WOMEN", "women") == 1.0);
    CHECK(trigram_similarity("", "") == 1.0);
}

TEST_CASE("similarity is symmetric and bounded") {
    const char* words[] = {"women", "woman", "men", "kids", "", "a", "wool coat"};
    for (const char* a : words)
        for (const char* b : words) {
            double s = trigram_similarity(a, b);
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
            CHECK(s == doctest::Approx(trigram_similarity(b, a)));
        }
}

TEST_CASE("closer strings score higher") {
    CHECK(trigram_similarity("women", "woman") > trigram_similarity("women", "men"));
    CHECK(trigram_similarity("wool coat", "wool") > trigram_similarity("wool coat", "kids"));
}

TEST_CASE("edit ratio basics") {
    CHECK(edit_ratio("abc", "abc") == 1.0);
    CHECK(edit_ratio("ABC", "abc") == 1.0);
    CHECK(edit_ratio("abc", "") == 0.0);
    // one substitution in three characters
    CHECK(edit_ratio("abc", "abd") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("value ranking: score desc, edit ratio desc, lexicographic asc") {
    // equal trigram score 0 against an unrelated key -> falls through the tiers
    std::vector<std::string> values = {"zzz", "yyy"};
    std::sort(values.begin(), values.end(), [](const std::string& a, const std::string& b) {
        return value_rank_less("qqq", a, b);
    });
    CHECK(values.front() == "yyy");  // lexicographic ascending tie-break

    // the exact match must always rank first
    values = {"woman", "women", "wool men"};
    std::sort(values.begin(), values.end(), [](const std::string& a, const std::string& b) {
        return value_rank_less("women", a, b);
    });
    CHECK(values.front() == "women");
}

TEST_CASE("ranking order is a strict weak ordering on a random domain") {
    std::mt19937 rng(5);
    const std::string alphabet = "abc";
    std::vector<std::string> domain;
    for (int i = 0; i < 60; ++i) {
        std::string s;
        size_t len = 1 + rng() % 5;
        for (size_t j = 0; j < len; ++j) s += alphabet[rng() % alphabet.size()];
        domain.push_back(s);
    }
    auto less = [](const std::string& a, const std::string& b) {
        return value_rank_less("abacab", a, b);
    };
    std::sort(domain.begin(), domain.end(), less);  // must not crash / UB
    for (size_t i = 0; i + 1 < domain.size(); ++i)
        CHECK_FALSE(less(domain[i + 1], domain[i]));
}
