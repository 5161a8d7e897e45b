#include "emsrag/corpus/clean.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace emsrag::corpus {

namespace {

bool is_tag_open(std::string_view s, std::size_t pos) {
    if (s[pos] != '<' || pos + 1 >= s.size()) return false;
    const char next = s[pos + 1];
    return std::isalpha(static_cast<unsigned char>(next)) || next == '/' || next == '!' || next == '?';
}

// Replaces well-formed <...> spans with a space. Unterminated '<' is kept.
std::string strip_tags(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_tag_open(s, i)) {
            const std::size_t close = s.find('>', i + 1);
            if (close != std::string_view::npos) {
                out += ' ';
                i = close + 1;
                continue;
            }
        }
        out += s[i++];
    }
    return out;
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x20 || (cp >= 0x7f && cp < 0xa0)) {  // control characters become gaps
        out += ' ';
    } else if (cp == 0xa0) {  // no-break space
        out += ' ';
    } else if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xc0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xe0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x110000) {
        out += static_cast<char>(0xf0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    }
}

// One decode pass: &amp; -> &, &#65; -> A, etc. Unknown entities pass through.
std::string decode_entities_once(std::string_view s) {
    static const std::pair<std::string_view, std::string_view> named[] = {
        {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""},
        {"apos", "'"}, {"nbsp", " "}, {"ndash", "-"}, {"mdash", "-"},
    };
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        const std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out += s[i++];
            continue;
        }
        const std::string_view body = s.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (!body.empty() && body[0] == '#') {
            unsigned long cp = 0;
            bool ok = body.size() > 1;
            if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
                for (std::size_t k = 2; ok && k < body.size(); ++k) {
                    const char c = body[k];
                    if (!std::isxdigit(static_cast<unsigned char>(c))) { ok = false; break; }
                    cp = cp * 16 + static_cast<unsigned long>(
                        std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                                                                    : std::tolower(c) - 'a' + 10);
                }
            } else {
                for (std::size_t k = 1; ok && k < body.size(); ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(body[k]))) { ok = false; break; }
                    cp = cp * 10 + static_cast<unsigned long>(body[k] - '0');
                }
            }
            if (ok && cp < 0x110000) {
                append_utf8(out, cp);
                decoded = true;
            }
        } else {
            for (const auto& [name, value] : named) {
                if (body == name) {
                    out += value;
                    decoded = true;
                    break;
                }
            }
        }
        i = decoded ? semi + 1 : i + 1;
        if (!decoded) out += '&';
    }
    return out;
}

bool is_space_byte(std::string_view s, std::size_t i, std::size_t* width) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c < 0x20 || c == 0x7f) {
        *width = 1;
        return true;
    }
    // UTF-8 no-break space (C2 A0)
    if (c == 0xc2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xa0) {
        *width = 2;
        return true;
    }
    return false;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t width = 1;
        if (is_space_byte(s, i, &width)) {
            pending = !out.empty();
            i += width;
        } else {
            if (pending) out += ' ';
            pending = false;
            out += s[i++];
        }
    }
    return out;
}

std::string clean_pass(std::string_view s) {
    return collapse_whitespace(decode_entities_once(strip_tags(s)));
}

}  // namespace

std::string clean_text(std::string_view raw) {
    std::string current = clean_pass(raw);
    // Iterate to a fixpoint so nested encodings ("&amp;nbsp;") and entities
    // that decode into markup are fully resolved; this is what makes the
    // function idempotent.
    for (int round = 0; round < 8; ++round) {
        std::string next = clean_pass(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    std::string la(a), lb(b);
    for (auto& c : la) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto& c : lb) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (la == lb) return 0;
    if (la.empty()) return lb.size();
    if (lb.empty()) return la.size();
    if (la.size() < lb.size()) la.swap(lb);  // lb is the shorter row

    std::vector<std::size_t> row(lb.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= la.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= lb.size(); ++j) {
            const std::size_t cost = (la[i - 1] == lb[j - 1]) ? 0 : 1;
            const std::size_t next = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = row[j];
            row[j] = next;
        }
    }
    return row[lb.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
    const std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return 1.0;
    const std::size_t dist = levenshtein_distance(a, b);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(max_len);
}

namespace {

// Disjoint-set over record indices; roots track their cluster's first index.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;  // smaller index becomes the root -> first-seen representative
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<QuestionRecord> dedup_questions(const std::vector<QuestionRecord>& records,
                                            double threshold, DedupStats* stats) {
    const std::size_t n = records.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string_view qi = records[i].question;
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::string_view qj = records[j].question;
            const std::size_t max_len = std::max(qi.size(), qj.size());
            if (max_len > 0) {
                // Length pre-filter: similarity can never exceed
                // 1 - |len_i - len_j| / max_len, so skip hopeless pairs.
                const std::size_t diff =
                    qi.size() > qj.size() ? qi.size() - qj.size() : qj.size() - qi.size();
                const double bound = 1.0 - static_cast<double>(diff) / static_cast<double>(max_len);
                if (!(bound > threshold)) continue;
            }
            if (levenshtein_similarity(qi, qj) > threshold) uf.unite(i, j);
        }
    }
    std::vector<QuestionRecord> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (uf.find(i) == i) kept.push_back(records[i]);
    if (stats != nullptr) {
        stats->input = n;
        stats->kept = kept.size();
        stats->dropped = n - kept.size();
    }
    return kept;
}

}  // namespace emsrag::corpus
