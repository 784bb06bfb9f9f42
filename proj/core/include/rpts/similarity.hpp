#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rpts/model.hpp"

namespace rpts {

/// Pluggable text-similarity backend: any function string x string -> [0,1]
/// with sim(x, x) = 1 for non-empty x.
using SimilarityFn = std::function<double(const std::string&, const std::string&)>;

/// Lowercases, strips punctuation, then splits: on whitespace for English,
/// per code point for Chinese.
std::vector<std::string> tokenize(const std::string& text, Language language);

/// F1 over the two token sets. Empty input on either side scores 0.
double token_set_f1(const std::string& a, const std::string& b, Language language);

/// The default deterministic backend (token-set F1) bound to one language.
SimilarityFn default_similarity(Language language);

}  // namespace rpts
