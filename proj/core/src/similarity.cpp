#include "rpts/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>

namespace rpts {

namespace {

// Decodes one UTF-8 code point starting at i; advances i past it.
// Malformed bytes are consumed one at a time and returned as-is.
std::uint32_t next_code_point(const std::string& s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    std::size_t len = 1;
    std::uint32_t cp = b0;
    if ((b0 & 0x80u) == 0x00u) {
        len = 1;
        cp = b0;
    } else if ((b0 & 0xE0u) == 0xC0u) {
        len = 2;
        cp = b0 & 0x1Fu;
    } else if ((b0 & 0xF0u) == 0xE0u) {
        len = 3;
        cp = b0 & 0x0Fu;
    } else if ((b0 & 0xF8u) == 0xF0u) {
        len = 4;
        cp = b0 & 0x07u;
    }
    if (i + len > s.size()) len = 1, cp = b0;
    for (std::size_t k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0u) != 0x80u) {  // truncated sequence: emit lead byte alone
            len = 1;
            cp = b0;
            break;
        }
        cp = (cp << 6) | (bk & 0x3Fu);
    }
    i += len;
    return cp;
}

void append_code_point(std::string& out, std::uint32_t cp) {
    if (cp < 0x80u) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800u) {
        out.push_back(static_cast<char>(0xC0u | (cp >> 6)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    } else if (cp < 0x10000u) {
        out.push_back(static_cast<char>(0xE0u | (cp >> 12)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    } else {
        out.push_back(static_cast<char>(0xF0u | (cp >> 18)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 12) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    }
}

bool is_cjk_punct(std::uint32_t cp) {
    // CJK symbols/punctuation, fullwidth forms, and common quote/dash marks.
    return (cp >= 0x3000u && cp <= 0x303Fu) || (cp >= 0xFF00u && cp <= 0xFF0Fu) ||
           (cp >= 0xFF1Au && cp <= 0xFF20u) || (cp >= 0xFF3Bu && cp <= 0xFF40u) ||
           (cp >= 0xFF5Bu && cp <= 0xFF65u) || (cp >= 0x2010u && cp <= 0x2027u) ||
           cp == 0x00B7u;
}

bool is_ascii_punct(std::uint32_t cp) {
    return cp < 0x80u && std::ispunct(static_cast<int>(cp)) != 0;
}

bool is_space_cp(std::uint32_t cp) {
    return (cp < 0x80u && std::isspace(static_cast<int>(cp)) != 0) || cp == 0x3000u;
}

std::uint32_t lower_ascii(std::uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
    return cp;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, Language language) {
    std::vector<std::string> tokens;
    if (language == Language::En) {
        std::string current;
        std::size_t i = 0;
        while (i < text.size()) {
            std::uint32_t cp = next_code_point(text, i);
            if (is_space_cp(cp) || is_ascii_punct(cp) || is_cjk_punct(cp)) {
                if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
                continue;
            }
            append_code_point(current, lower_ascii(cp));
        }
        if (!current.empty()) tokens.push_back(std::move(current));
        return tokens;
    }
    // zh: one token per code point, punctuation and whitespace dropped.
    std::size_t i = 0;
    while (i < text.size()) {
        std::uint32_t cp = next_code_point(text, i);
        if (is_space_cp(cp) || is_ascii_punct(cp) || is_cjk_punct(cp)) continue;
        std::string tok;
        append_code_point(tok, lower_ascii(cp));
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

double token_set_f1(const std::string& a, const std::string& b, Language language) {
    auto ta = tokenize(a, language);
    auto tb = tokenize(b, language);
    std::set<std::string> sa(ta.begin(), ta.end());
    std::set<std::string> sb(tb.begin(), tb.end());
    if (sa.empty() || sb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& t : sa) common += sb.count(t);
    if (common == 0) return 0.0;
    // 2PR/(P+R) collapses to 2|A∩B| / (|A| + |B|) for set-based P and R.
    return 2.0 * static_cast<double>(common) /
           static_cast<double>(sa.size() + sb.size());
}

SimilarityFn default_similarity(Language language) {
    return [language](const std::string& a, const std::string& b) {
        return token_set_f1(a, b, language);
    };
}

}  // namespace rpts
