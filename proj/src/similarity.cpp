#include "bridgescope/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <vector>

namespace bs {
namespace {

std::string fold(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::set<std::string> trigrams(const std::string& folded) {
    std::string padded = "  " + folded + " ";
    std::set<std::string> grams;
    for (size_t i = 0; i + 3 <= padded.size(); ++i) grams.insert(padded.substr(i, 3));
    return grams;
}

}  // namespace

double trigram_similarity(const std::string& a, const std::string& b) {
    std::string fa = fold(a), fb = fold(b);
    if (fa == fb) return 1.0;
    std::set<std::string> ga = trigrams(fa), gb = trigrams(fb);
    if (ga.empty() && gb.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& g : ga) inter += gb.count(g);
    size_t uni = ga.size() + gb.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double edit_ratio(const std::string& a, const std::string& b) {
    std::string fa = fold(a), fb = fold(b);
    const size_t n = fa.size(), m = fb.size();
    if (n == 0 && m == 0) return 1.0;
    std::vector<size_t> prev(m + 1), curr(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        curr[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t cost = fa[i - 1] == fb[j - 1] ? 0 : 1;
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + cost});
        }
        std::swap(prev, curr);
    }
    double dist = static_cast<double>(prev[m]);
    return 1.0 - dist / static_cast<double>(std::max(n, m));
}

bool value_rank_less(const std::string& key, const std::string& a, const std::string& b) {
    double sa = trigram_similarity(key, a), sb = trigram_similarity(key, b);
    if (sa != sb) return sa > sb;
    double ea = edit_ratio(key, a), eb = edit_ratio(key, b);
    if (ea != eb) return ea > eb;
    return a < b;
}

}  // namespace bs
