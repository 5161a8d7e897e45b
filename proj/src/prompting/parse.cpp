#include "emsrag/prompting/parse.hpp"

#include <algorithm>
#include <cctype>

namespace emsrag::prompting {

const char* parse_method_name(ParseMethod m) {
    switch (m) {
        case ParseMethod::TagMatch: return "TagMatch";
        case ParseMethod::LetterScan: return "LetterScan";
        case ParseMethod::OptionTextMatch: return "OptionTextMatch";
    }
    return "TagMatch";
}

namespace {

bool is_letter_at(std::string_view s, std::size_t i) {
    return std::isalpha(static_cast<unsigned char>(s[i])) != 0;
}

// Standalone single letters (no alphanumeric neighbors) in `text`, uppercased
// when `accept_lowercase`, intersected with the valid label set.
std::set<char> standalone_letters(std::string_view text, const std::set<char>& valid,
                                  bool accept_lowercase) {
    std::set<char> found;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_letter_at(text, i)) continue;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        const bool right_ok =
            i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (!left_ok || !right_ok) continue;
        char c = text[i];
        if (std::islower(static_cast<unsigned char>(c))) {
            if (!accept_lowercase) continue;
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        if (valid.count(c) > 0) found.insert(c);
    }
    return found;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

std::size_t find_answer_tag(std::string_view line) {
    // case-insensitive "answer" followed by optional spaces and ':'
    static constexpr std::string_view kWord = "answer";
    for (std::size_t i = 0; i + kWord.size() <= line.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < kWord.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(line[i + k])) != kWord[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::size_t j = i + kWord.size();
        while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
        if (j < line.size() && line[j] == ':') return j + 1;  // offset just past the colon
    }
    return std::string_view::npos;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::optional<ParsedAnswer> parse_answer(std::string_view completion,
                                         const std::vector<corpus::Option>& options) {
    std::set<char> valid;
    for (const auto& option : options) valid.insert(option.label);

    const auto lines = split_lines(completion);

    // Stage 1: the last line carrying an "Answer:" tag.
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        const std::size_t after_colon = find_answer_tag(*it);
        if (after_colon == std::string_view::npos) continue;
        const std::set<char> labels =
            standalone_letters(it->substr(after_colon), valid, /*accept_lowercase=*/true);
        if (!labels.empty())
            return ParsedAnswer{labels, std::string(completion), ParseMethod::TagMatch};
        break;  // a tag line with no valid letters falls through to stage 2
    }

    // Stage 2: standalone uppercase letters on the last non-empty line.
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        if (it->find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const std::set<char> labels = standalone_letters(*it, valid, /*accept_lowercase=*/false);
        if (!labels.empty())
            return ParsedAnswer{labels, std::string(completion), ParseMethod::LetterScan};
        break;
    }

    // Stage 3: longest option text appearing verbatim (case-insensitive).
    const std::string haystack = lowercase(completion);
    const corpus::Option* best = nullptr;
    for (const auto& option : options) {
        if (option.text.empty()) continue;
        if (haystack.find(lowercase(option.text)) == std::string::npos) continue;
        if (best == nullptr || option.text.size() > best->text.size()) best = &option;
    }
    if (best != nullptr)
        return ParsedAnswer{{best->label}, std::string(completion), ParseMethod::OptionTextMatch};

    return std::nullopt;
}

}  // namespace emsrag::prompting
