#include "emsrag/prompting/templates.hpp"

#include <fstream>
#include <sstream>

#include "emsrag/common/error.hpp"

namespace emsrag::prompting {

namespace {

// R"(...)" blocks below are the v1 wording. Changing any of them is a
// template-version bump: rendered prompts are frozen by golden-file tests.

constexpr const char* kSystem =
    R"(You are an emergency medical services (EMS) assistant answering multiple-choice exam questions. Read each question carefully and answer with the correct option letter(s).)";

constexpr const char* kAnswerInstruction =
    R"(Give your final answer on the last line in the form "Answer: <letter>". If more than one option is correct, list every correct letter separated by commas (for example "Answer: A, C").)";

constexpr const char* kQuestionBlock =
    R"(Question: {question}
Options:
{options})";

constexpr const char* kExemplarBlock =
    R"(Question: {question}
Options:
{options}
Answer: {answers})";

constexpr const char* kExpertiseBlock =
    R"(You are answering as a {certification}-certified EMS provider. This question falls under the following subject area(s): {subjects}.

)";

constexpr const char* kKbContextHeader = "Knowledge base context:";
constexpr const char* kPrContextHeader = "Patient record context:";
constexpr const char* kContextItem = "[{tag} {rank}] {text}";

constexpr const char* kZeroShotUser =
    R"({question_block}

{answer_instruction})";

constexpr const char* kFewShotUser =
    R"(Here are some solved examples:

{exemplars}

Now answer the following question.

{question_block}

{answer_instruction})";

constexpr const char* kCotUser =
    R"({expertise_block}{question_block}

Think through the question step by step, then give your final answer.

{answer_instruction})";

constexpr const char* kRagUser =
    R"({expertise_block}{context_block}{question_block}

Use the reference context above when it is relevant. Think through the question step by step, then give your final answer.

{answer_instruction})";

}  // namespace

std::map<std::string, std::string*> TemplateSet::parts() {
    return {
        {"system", &system},
        {"answer_instruction", &answer_instruction},
        {"question_block", &question_block},
        {"exemplar_block", &exemplar_block},
        {"expertise_block", &expertise_block},
        {"kb_context_header", &kb_context_header},
        {"pr_context_header", &pr_context_header},
        {"context_item", &context_item},
        {"zero_shot_user", &zero_shot_user},
        {"few_shot_user", &few_shot_user},
        {"cot_user", &cot_user},
        {"rag_user", &rag_user},
    };
}

const TemplateSet& TemplateSet::builtin_v1() {
    static const TemplateSet set = [] {
        TemplateSet s;
        s.version = "v1";
        s.system = kSystem;
        s.answer_instruction = kAnswerInstruction;
        s.question_block = kQuestionBlock;
        s.exemplar_block = kExemplarBlock;
        s.expertise_block = kExpertiseBlock;
        s.kb_context_header = kKbContextHeader;
        s.pr_context_header = kPrContextHeader;
        s.context_item = kContextItem;
        s.zero_shot_user = kZeroShotUser;
        s.few_shot_user = kFewShotUser;
        s.cot_user = kCotUser;
        s.rag_user = kRagUser;
        return s;
    }();
    return set;
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("template directory not found: " + dir.string());
    TemplateSet set = builtin_v1();
    set.version = dir.filename().string();
    auto read_part = [&dir](const std::string& name) -> std::string {
        std::ifstream in(dir / (name + ".txt"), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        if (!text.empty() && text.back() == '\n') text.pop_back();
        return text;
    };
    for (auto& [name, slot] : set.parts()) {
        if (std::filesystem::exists(dir / (name + ".txt"))) *slot = read_part(name);
    }
    if (std::filesystem::exists(dir / "version.txt")) set.version = read_part("version");
    return set;
}

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const std::size_t close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                const std::string name(tmpl.substr(i + 1, close - i - 1));
                const auto it = values.find(name);
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

}  // namespace emsrag::prompting
