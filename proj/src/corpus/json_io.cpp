#include "emsrag/corpus/json_io.hpp"

#include "emsrag/common/error.hpp"

namespace emsrag::corpus {

namespace {

SubjectArea parse_subject(const std::string& s) {
    const auto subject = subject_from_string(s);
    if (!subject) throw IoError("unknown subject: " + s);
    return *subject;
}

template <typename T, typename Parser>
T parse_enum(const std::string& s, Parser parser, const char* what) {
    const auto v = parser(s);
    if (!v) throw IoError(std::string("unknown ") + what + ": " + s);
    return *v;
}

}  // namespace

void to_json(nlohmann::json& j, const Option& o) {
    j = nlohmann::json{{"label", std::string(1, o.label)}, {"text", o.text}};
}

void from_json(const nlohmann::json& j, Option& o) {
    const auto label = j.at("label").get<std::string>();
    if (label.size() != 1) throw IoError("option label must be a single letter: " + label);
    o.label = label[0];
    o.text = j.at("text").get<std::string>();
}

void to_json(nlohmann::json& j, const QuestionRecord& r) {
    j = nlohmann::json{
        {"id", r.id},
        {"question", r.question},
        {"options", r.options},
        {"gold", nlohmann::json::array()},
        {"certification", certification_name(r.certification)},
        {"subjects", nlohmann::json::array()},
        {"split", split_name(r.split)},
    };
    for (const char g : r.gold) j["gold"].push_back(std::string(1, g));
    for (const auto s : r.subjects) j["subjects"].push_back(subject_id(s));
    if (r.explanation) j["explanation"] = *r.explanation;
    if (r.source_url) j["source_url"] = *r.source_url;
}

void from_json(const nlohmann::json& j, QuestionRecord& r) {
    r = QuestionRecord{};
    r.id = j.at("id").get<std::string>();
    r.question = j.at("question").get<std::string>();
    r.options = j.at("options").get<std::vector<Option>>();
    for (const auto& g : j.at("gold")) {
        const auto s = g.get<std::string>();
        if (s.size() != 1) throw IoError("gold label must be a single letter: " + s);
        r.gold.insert(s[0]);
    }
    if (j.contains("explanation") && !j["explanation"].is_null())
        r.explanation = j["explanation"].get<std::string>();
    if (j.contains("source_url") && !j["source_url"].is_null())
        r.source_url = j["source_url"].get<std::string>();
    if (j.contains("certification") && !j["certification"].is_null())
        r.certification = parse_enum<Certification>(j["certification"].get<std::string>(),
                                                    certification_from_string, "certification");
    if (j.contains("subjects"))
        for (const auto& s : j["subjects"]) r.subjects.insert(parse_subject(s.get<std::string>()));
    if (j.contains("split") && !j["split"].is_null())
        r.split = parse_enum<Split>(j["split"].get<std::string>(), split_from_string, "split");
}

void to_json(nlohmann::json& j, const KbDocument& d) {
    j = nlohmann::json{
        {"id", d.id},           {"title", d.title},
        {"body", d.body},       {"subject", subject_id(d.subject)},
        {"source", d.source},   {"media_type", media_type_name(d.media_type)},
    };
}

void from_json(const nlohmann::json& j, KbDocument& d) {
    d = KbDocument{};
    d.id = j.at("id").get<std::string>();
    d.title = j.value("title", std::string{});
    d.body = j.at("body").get<std::string>();
    d.subject = parse_subject(j.at("subject").get<std::string>());
    d.source = j.value("source", std::string{});
    if (j.contains("media_type"))
        d.media_type = parse_enum<MediaType>(j["media_type"].get<std::string>(),
                                             media_type_from_string, "media_type");
}

void to_json(nlohmann::json& j, const PatientRecord& r) {
    j = nlohmann::json{
        {"id", r.id},
        {"fields", nlohmann::json::array()},
        {"subject", subject_id(r.subject)},
        {"text", r.text},
    };
    for (const auto& [k, v] : r.fields) j["fields"].push_back({k, v});
}

void from_json(const nlohmann::json& j, PatientRecord& r) {
    r = PatientRecord{};
    r.id = j.at("id").get<std::string>();
    for (const auto& f : j.at("fields")) {
        if (!f.is_array() || f.size() != 2) throw IoError("patient field must be a [key, value] pair");
        r.fields.emplace_back(f[0].get<std::string>(), f[1].get<std::string>());
    }
    if (j.contains("subject")) r.subject = parse_subject(j["subject"].get<std::string>());
    r.text = j.value("text", std::string{});
}

void to_json(nlohmann::json& j, const Chunk& c) {
    j = nlohmann::json{
        {"id", c.id},
        {"parent_id", c.parent_id},
        {"corpus", corpus_tag_name(c.corpus)},
        {"subject", subject_id(c.subject)},
        {"token_start", c.token_start},
        {"token_end", c.token_end},
        {"text", c.text},
    };
}

void from_json(const nlohmann::json& j, Chunk& c) {
    c = Chunk{};
    c.id = j.at("id").get<std::string>();
    c.parent_id = j.at("parent_id").get<std::string>();
    c.corpus = parse_enum<CorpusTag>(j.at("corpus").get<std::string>(), corpus_tag_from_string, "corpus tag");
    c.subject = parse_subject(j.at("subject").get<std::string>());
    c.token_start = j.at("token_start").get<std::size_t>();
    c.token_end = j.at("token_end").get<std::size_t>();
    c.text = j.at("text").get<std::string>();
}

}  // namespace emsrag::corpus
