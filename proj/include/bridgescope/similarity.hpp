#pragma once

#include <string>

namespace bs {

// Case-folded character-trigram Jaccard similarity in [0, 1]; an exact
// case-insensitive match is forced to 1.0. Strings are padded pg_trgm style
// (two leading, one trailing space) so short keys still form trigrams.
double trigram_similarity(const std::string& a, const std::string& b);

// Normalized Levenshtein similarity in [0, 1] over case-folded inputs,
// used only to refine ties between equal trigram scores.
double edit_ratio(const std::string& a, const std::string& b);

// Ranking order for get_value: score desc, then edit ratio desc, then value
// lexicographically ascending.
bool value_rank_less(const std::string& key, const std::string& a, const std::string& b);

}  // namespace bs
