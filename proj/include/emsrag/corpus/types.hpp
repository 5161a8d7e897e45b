#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace emsrag::corpus {

// Canonical EMS subject areas. Enum order defines the index layout used by
// the expertise heads (probability vector position j == enum value j).
enum class SubjectArea : int {
    airway = 0,
    anatomy = 1,
    assessment = 2,
    cardiovascular = 3,
    ems_operations = 4,
    medical_ob = 5,
    pediatrics = 6,
    pharmacology = 7,
    trauma = 8,
    others = 9,
};

inline constexpr int kSubjectCount = 10;

const char* subject_id(SubjectArea s);       // canonical token, e.g. "ems_operations"
const char* subject_display(SubjectArea s);  // prompt-facing name, e.g. "EMS operations"
std::optional<SubjectArea> subject_from_string(std::string_view name);
const std::array<SubjectArea, kSubjectCount>& all_subjects();

// Registered alias -> canonical subject lookups (case/punctuation tolerant).
// The built-in table is injective; add() refuses conflicting aliases.
class SubjectAliases {
public:
    SubjectAliases();  // built-in aliases
    void add(std::string_view alias, SubjectArea subject);
    std::optional<SubjectArea> resolve(std::string_view name) const;

    static std::string normalize(std::string_view name);

private:
    std::vector<std::pair<std::string, SubjectArea>> table_;
};

// Provider certification levels. The first four are the trainable classes for
// the level head; NA marks records without a level annotation.
enum class Certification : int { EMR = 0, EMT = 1, AEMT = 2, Paramedic = 3, NA = 4 };

inline constexpr int kCertificationCount = 4;

const char* certification_name(Certification c);
std::optional<Certification> certification_from_string(std::string_view name);

enum class Split { train, val, test };
const char* split_name(Split s);
std::optional<Split> split_from_string(std::string_view name);

enum class CorpusTag { KB, PR };
const char* corpus_tag_name(CorpusTag t);
std::optional<CorpusTag> corpus_tag_from_string(std::string_view name);

enum class MediaType { transcript, textbook, guideline, slides, flashcard };
const char* media_type_name(MediaType m);
std::optional<MediaType> media_type_from_string(std::string_view name);

struct Option {
    char label = 'A';
    std::string text;
};

struct QuestionRecord {
    std::string id;
    std::string question;
    std::vector<Option> options;          // 2..7, labels contiguous from 'A'
    std::set<char> gold;                  // >= 1, subset of option labels
    std::optional<std::string> explanation;
    std::optional<std::string> source_url;
    Certification certification = Certification::NA;
    std::set<SubjectArea> subjects;       // may be empty only in the train split
    Split split = Split::train;

    // Invariant violations, human-readable; empty when the record is valid.
    std::vector<std::string> validate() const;
};

struct KbDocument {
    std::string id;
    std::string title;
    std::string body;
    SubjectArea subject = SubjectArea::others;
    std::string source;
    MediaType media_type = MediaType::textbook;
};

struct PatientRecord {
    std::string id;
    std::vector<std::pair<std::string, std::string>> fields;  // filtered
    SubjectArea subject = SubjectArea::others;
    std::string text;  // flattened "Key: Value; Key: Value"
};

struct Chunk {
    std::string id;         // "<parent_id>#<ordinal>"
    std::string parent_id;
    CorpusTag corpus = CorpusTag::KB;
    SubjectArea subject = SubjectArea::others;
    std::size_t token_start = 0;  // token offsets within the parent text
    std::size_t token_end = 0;    // exclusive
    std::string text;
};

}  // namespace emsrag::corpus
