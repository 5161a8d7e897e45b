#include "emsrag/corpus/types.hpp"

#include <cctype>
#include <stdexcept>

namespace emsrag::corpus {

namespace {

struct SubjectNames {
    SubjectArea subject;
    const char* id;
    const char* display;
};

constexpr SubjectNames kSubjectNames[kSubjectCount] = {
    {SubjectArea::airway, "airway", "airway"},
    {SubjectArea::anatomy, "anatomy", "anatomy"},
    {SubjectArea::assessment, "assessment", "assessment"},
    {SubjectArea::cardiovascular, "cardiovascular", "cardiovascular"},
    {SubjectArea::ems_operations, "ems_operations", "EMS operations"},
    {SubjectArea::medical_ob, "medical_ob", "medical & OB"},
    {SubjectArea::pediatrics, "pediatrics", "pediatrics"},
    {SubjectArea::pharmacology, "pharmacology", "pharmacology"},
    {SubjectArea::trauma, "trauma", "trauma"},
    {SubjectArea::others, "others", "others"},
};

}  // namespace

const char* subject_id(SubjectArea s) { return kSubjectNames[static_cast<int>(s)].id; }
const char* subject_display(SubjectArea s) { return kSubjectNames[static_cast<int>(s)].display; }

const std::array<SubjectArea, kSubjectCount>& all_subjects() {
    static const std::array<SubjectArea, kSubjectCount> subjects = [] {
        std::array<SubjectArea, kSubjectCount> out{};
        for (int i = 0; i < kSubjectCount; ++i) out[static_cast<std::size_t>(i)] = static_cast<SubjectArea>(i);
        return out;
    }();
    return subjects;
}

std::string SubjectAliases::normalize(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool pending_space = false;
    auto push = [&](char c) {
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += c;
    };
    for (const char raw : name) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            push(static_cast<char>(std::tolower(c)));
        } else if (c == '&' || c == '/') {
            push(static_cast<char>(c));
        } else {
            // separators (space, '-', '_', punctuation) collapse to one gap
            pending_space = true;
        }
    }
    return out;
}

SubjectAliases::SubjectAliases() {
    const std::pair<const char*, SubjectArea> builtin[] = {
        {"airway", SubjectArea::airway},
        {"airway & ventilation", SubjectArea::airway},
        {"airway and ventilation", SubjectArea::airway},
        {"airway management", SubjectArea::airway},
        {"anatomy", SubjectArea::anatomy},
        {"anatomy and physiology", SubjectArea::anatomy},
        {"assessment", SubjectArea::assessment},
        {"patient assessment", SubjectArea::assessment},
        {"cardiovascular", SubjectArea::cardiovascular},
        {"cardiology", SubjectArea::cardiovascular},
        {"ems operations", SubjectArea::ems_operations},
        {"operations", SubjectArea::ems_operations},
        {"medical & ob", SubjectArea::medical_ob},
        {"medical ob", SubjectArea::medical_ob},
        {"medical & ob/gyn", SubjectArea::medical_ob},
        {"medical & obstetrics", SubjectArea::medical_ob},
        {"pediatrics", SubjectArea::pediatrics},
        {"pediatric", SubjectArea::pediatrics},
        {"pharmacology", SubjectArea::pharmacology},
        {"trauma", SubjectArea::trauma},
        {"others", SubjectArea::others},
        {"other", SubjectArea::others},
    };
    for (const auto& [alias, subject] : builtin) add(alias, subject);
}

void SubjectAliases::add(std::string_view alias, SubjectArea subject) {
    const std::string key = normalize(alias);
    if (key.empty()) throw std::invalid_argument("empty subject alias");
    for (const auto& [existing, target] : table_) {
        if (existing == key) {
            if (target != subject)
                throw std::invalid_argument("conflicting subject alias: " + key);
            return;
        }
    }
    table_.emplace_back(key, subject);
}

std::optional<SubjectArea> SubjectAliases::resolve(std::string_view name) const {
    const std::string key = normalize(name);
    for (const auto& [alias, subject] : table_)
        if (alias == key) return subject;
    return std::nullopt;
}

std::optional<SubjectArea> subject_from_string(std::string_view name) {
    static const SubjectAliases aliases;
    return aliases.resolve(name);
}

const char* certification_name(Certification c) {
    switch (c) {
        case Certification::EMR: return "EMR";
        case Certification::EMT: return "EMT";
        case Certification::AEMT: return "AEMT";
        case Certification::Paramedic: return "Paramedic";
        case Certification::NA: return "NA";
    }
    return "NA";
}

std::optional<Certification> certification_from_string(std::string_view name) {
    std::string key;
    for (const char c : name) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "emr") return Certification::EMR;
    if (key == "emt") return Certification::EMT;
    if (key == "aemt") return Certification::AEMT;
    if (key == "paramedic") return Certification::Paramedic;
    if (key == "na" || key == "n/a" || key.empty()) return Certification::NA;
    return std::nullopt;
}

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "train";
}

std::optional<Split> split_from_string(std::string_view name) {
    if (name == "train") return Split::train;
    if (name == "val" || name == "validation" || name == "dev") return Split::val;
    if (name == "test") return Split::test;
    return std::nullopt;
}

const char* corpus_tag_name(CorpusTag t) { return t == CorpusTag::KB ? "KB" : "PR"; }

std::optional<CorpusTag> corpus_tag_from_string(std::string_view name) {
    if (name == "KB" || name == "kb") return CorpusTag::KB;
    if (name == "PR" || name == "pr") return CorpusTag::PR;
    return std::nullopt;
}

const char* media_type_name(MediaType m) {
    switch (m) {
        case MediaType::transcript: return "transcript";
        case MediaType::textbook: return "textbook";
        case MediaType::guideline: return "guideline";
        case MediaType::slides: return "slides";
        case MediaType::flashcard: return "flashcard";
    }
    return "textbook";
}

std::optional<MediaType> media_type_from_string(std::string_view name) {
    if (name == "transcript") return MediaType::transcript;
    if (name == "textbook") return MediaType::textbook;
    if (name == "guideline") return MediaType::guideline;
    if (name == "slides") return MediaType::slides;
    if (name == "flashcard") return MediaType::flashcard;
    return std::nullopt;
}

std::vector<std::string> QuestionRecord::validate() const {
    std::vector<std::string> problems;
    if (id.empty()) problems.push_back("id is empty");
    if (question.empty()) problems.push_back("question text is empty");
    if (options.size() < 2 || options.size() > 7)
        problems.push_back("option count " + std::to_string(options.size()) + " outside 2..7");
    for (std::size_t i = 0; i < options.size(); ++i) {
        const char expected = static_cast<char>('A' + i);
        if (options[i].label != expected) {
            problems.push_back(std::string("option labels not contiguous from 'A' (slot ") +
                               std::to_string(i) + " is '" + options[i].label + "')");
            break;
        }
    }
    if (gold.empty()) problems.push_back("gold answer set is empty");
    for (const char g : gold) {
        const std::size_t idx = static_cast<std::size_t>(g - 'A');
        if (g < 'A' || idx >= options.size()) {
            problems.push_back(std::string("gold label '") + g + "' is not an option label");
            break;
        }
    }
    if (subjects.empty() && split != Split::train)
        problems.push_back("subjects empty outside the train split");
    return problems;
}

}  // namespace emsrag::corpus
