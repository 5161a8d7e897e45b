#include "emsrag/metrics/judge.hpp"

#include <cctype>

#include "emsrag/common/error.hpp"
#include "emsrag/prompting/templates.hpp"

namespace emsrag::metrics {

const std::string& judge_prompt_template() {
    static const std::string tmpl =
        "Question: {question}\n"
        "Answer: {answer}\n"
        "Retrieved Chunk: {chunk}\n"
        "Rubric\n"
        "- Relevance\n"
        "• \"Relevant\" — The chunk provides information that is useful for answering the "
        "question.\n"
        "• \"Irrelevant\" — The chunk is off-topic or supplies no helpful information.\n"
        "- Supportiveness\n"
        "Evaluate how much of a hypothetical answer could be *entailed* by this chunk alone.\n"
        "• \"Fully\" — All necessary information is present; the answer would be "
        "completely supported.\n"
        "• \"Partially\" — Some but not all required information is present.\n"
        "• \"None\" — No information is supported, or the chunk contradicts the answer.";
    return tmpl;
}

std::string render_judge_prompt(std::string_view question, std::string_view answer,
                                std::string_view chunk) {
    return prompting::substitute(judge_prompt_template(), {{"question", std::string(question)},
                                                           {"answer", std::string(answer)},
                                                           {"chunk", std::string(chunk)}});
}

namespace {

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(haystack[i + k])));
            const char b = static_cast<char>(std::tolower(static_cast<unsigned char>(needle[k])));
            if (a != b) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

JudgedChunk parse_judgment(std::string_view completion) {
    JudgedChunk judged;

    // "irrelevant" embeds "relevant", so test for it first.
    if (contains_ci(completion, "irrelevant"))
        judged.relevance = Relevance::Irrelevant;
    else if (contains_ci(completion, "relevant"))
        judged.relevance = Relevance::Relevant;
    else
        throw UnparseableJudgment("no relevance label in: " + std::string(completion));

    if (contains_ci(completion, "fully"))
        judged.supportiveness = Supportiveness::Fully;
    else if (contains_ci(completion, "partially"))
        judged.supportiveness = Supportiveness::Partially;
    else if (contains_ci(completion, "none"))
        judged.supportiveness = Supportiveness::None;
    else
        throw UnparseableJudgment("no supportiveness label in: " + std::string(completion));

    return judged;
}

JudgedChunk judge_chunk(std::string_view question, std::string_view answer,
                        std::string_view chunk, backends::ChatBackend& backend,
                        const std::string& model) {
    backends::ChatRequest request;
    request.model = model;
    request.messages.push_back({"user", render_judge_prompt(question, answer, chunk)});
    const backends::ChatResponse response = backend.chat(request);
    return parse_judgment(response.text);
}

}  // namespace emsrag::metrics
