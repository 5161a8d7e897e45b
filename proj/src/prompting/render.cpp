#include "emsrag/prompting/render.hpp"

#include <stdexcept>

#include "emsrag/common/error.hpp"
#include "emsrag/common/rng.hpp"

namespace emsrag::prompting {

const char* prompt_family_name(PromptFamily f) {
    switch (f) {
        case PromptFamily::ZeroShot: return "0shot";
        case PromptFamily::FewShot: return "kshot";
        case PromptFamily::CoT: return "cot";
        case PromptFamily::ExpertCoT: return "expert-cot";
        case PromptFamily::RAG: return "rag";
        case PromptFamily::ExpertRAG: return "expert-rag";
    }
    return "0shot";
}

std::optional<PromptFamily> prompt_family_from_string(std::string_view name) {
    if (name == "0shot" || name == "zero-shot") return PromptFamily::ZeroShot;
    if (name == "kshot" || name == "few-shot") return PromptFamily::FewShot;
    if (name == "cot") return PromptFamily::CoT;
    if (name == "expert-cot") return PromptFamily::ExpertCoT;
    if (name == "rag") return PromptFamily::RAG;
    if (name == "expert-rag") return PromptFamily::ExpertRAG;
    return std::nullopt;
}

std::string render_options(const corpus::QuestionRecord& record) {
    std::string out;
    for (std::size_t i = 0; i < record.options.size(); ++i) {
        if (i > 0) out += '\n';
        out += record.options[i].label;
        out += ". ";
        out += record.options[i].text;
    }
    return out;
}

namespace {

std::string render_question_block(const TemplateSet& templates,
                                  const corpus::QuestionRecord& record) {
    return substitute(templates.question_block,
                      {{"question", record.question}, {"options", render_options(record)}});
}

std::string render_gold_letters(const corpus::QuestionRecord& record) {
    std::string out;
    for (const char g : record.gold) {
        if (!out.empty()) out += ", ";
        out += g;
    }
    return out;
}

std::string render_exemplars(const TemplateSet& templates,
                             const std::vector<corpus::QuestionRecord>& exemplars) {
    std::string out;
    for (std::size_t i = 0; i < exemplars.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += substitute(templates.exemplar_block,
                          {{"question", exemplars[i].question},
                           {"options", render_options(exemplars[i])},
                           {"answers", render_gold_letters(exemplars[i])}});
    }
    return out;
}

std::string render_expertise_block(const TemplateSet& templates, const Expertise* expertise) {
    if (expertise == nullptr || expertise->degenerate()) return "";
    std::string subjects;
    for (const auto s : expertise->subjects) {
        if (!subjects.empty()) subjects += ", ";
        subjects += corpus::subject_display(s);
    }
    if (subjects.empty()) subjects = "none specified";
    return substitute(templates.expertise_block,
                      {{"certification", corpus::certification_name(expertise->certification)},
                       {"subjects", subjects}});
}

std::string render_context_block(const TemplateSet& templates,
                                 const retrieval::RetrievalBundle& bundle,
                                 std::size_t* chunk_count) {
    std::string out;
    auto append_section = [&](const std::string& header,
                              const std::vector<retrieval::ScoredChunk>& hits, const char* tag) {
        if (hits.empty()) return;
        out += header;
        for (std::size_t i = 0; i < hits.size(); ++i) {
            out += '\n';
            out += substitute(templates.context_item, {{"tag", tag},
                                                       {"rank", std::to_string(i + 1)},
                                                       {"text", hits[i].chunk.text}});
        }
        out += "\n\n";
        *chunk_count += hits.size();
    };
    append_section(templates.kb_context_header, bundle.kb_hits, "KB");
    append_section(templates.pr_context_header, bundle.pr_hits, "PR");
    return out;
}

}  // namespace

PromptBundle render(const TemplateSet& templates, PromptFamily family,
                    const corpus::QuestionRecord& record,
                    const std::vector<corpus::QuestionRecord>* exemplars,
                    const Expertise* expertise, const retrieval::RetrievalBundle* bundle) {
    PromptBundle out;
    out.family = family;
    out.system = templates.system;
    out.template_version = templates.version;

    const bool needs_expertise = family == PromptFamily::ExpertCoT || family == PromptFamily::ExpertRAG;
    const bool needs_bundle = family == PromptFamily::RAG || family == PromptFamily::ExpertRAG;
    if (needs_expertise && expertise == nullptr)
        throw MissingExpertise(std::string("family ") + prompt_family_name(family) +
                               " requires an expertise prediction");
    if (needs_bundle && bundle == nullptr)
        throw MissingBundle(std::string("family ") + prompt_family_name(family) +
                            " requires a retrieval bundle");

    std::map<std::string, std::string> values{
        {"question_block", render_question_block(templates, record)},
        {"answer_instruction", templates.answer_instruction},
    };

    switch (family) {
        case PromptFamily::ZeroShot:
            out.user = substitute(templates.zero_shot_user, values);
            break;
        case PromptFamily::FewShot: {
            if (exemplars == nullptr)
                throw std::invalid_argument("few-shot rendering requires exemplars");
            values["exemplars"] = render_exemplars(templates, *exemplars);
            out.user = substitute(templates.few_shot_user, values);
            out.fewshot_k = static_cast<int>(exemplars->size());
            break;
        }
        case PromptFamily::CoT:
        case PromptFamily::ExpertCoT: {
            values["expertise_block"] =
                render_expertise_block(templates, family == PromptFamily::ExpertCoT ? expertise : nullptr);
            out.user = substitute(templates.cot_user, values);
            break;
        }
        case PromptFamily::RAG:
        case PromptFamily::ExpertRAG: {
            values["expertise_block"] = render_expertise_block(
                templates, family == PromptFamily::ExpertRAG ? expertise : nullptr);
            values["context_block"] = render_context_block(templates, *bundle, &out.context_chunks);
            out.user = substitute(templates.rag_user, values);
            break;
        }
    }
    if (needs_expertise) out.injected = *expertise;
    return out;
}

std::vector<corpus::QuestionRecord> select_exemplars(
    const std::vector<corpus::QuestionRecord>& train, std::size_t k, std::uint64_t seed) {
    if (k > train.size())
        throw InsufficientTrain("select_exemplars: k=" + std::to_string(k) + " > train size " +
                                std::to_string(train.size()));
    rng::SplitMix64 gen(seed);
    const auto picks = rng::sample_without_replacement(train.size(), k, gen);
    std::vector<corpus::QuestionRecord> out;
    out.reserve(k);
    for (const auto i : picks) out.push_back(train[i]);
    return out;
}

}  // namespace emsrag::prompting
