#include "emsrag/coverage/concepts.hpp"

#include <cctype>
#include <set>

#include "emsrag/common/error.hpp"
#include "emsrag/prompting/templates.hpp"

namespace emsrag::coverage {

const std::string& extraction_prompt_template() {
    static const std::string tmpl =
        "Extract all EMS concepts from the following text.\n"
        "Here are some examples of EMS concepts: gelastic epilepsy, visual seizure, pallor, pale "
        "color, aox4, pare down, cut down\n"
        "Return all the extracted EMS concepts as a lowercase letter in strict JSON format, like: "
        "[\"fever\", \"cardiac arrest\"]\n"
        "\n"
        "Here is one example:\n"
        "Text: Early symptoms include cough, wheezing, shortness of breath. Lung transplantation "
        "is an option.\n"
        "Response: Let's think step by step,\n"
        "\n"
        "Step1: label the tokens one by one \"EMS concept\", or \"none\".\n"
        "-Early: none\n"
        "-symptoms: none\n"
        "-include: none\n"
        "-cough: EMS concept\n"
        "-wheezing: EMS concept\n"
        "-shortness: EMS concept\n"
        "-of: none\n"
        "-breath: EMS concept\n"
        "-Lung: EMS concept\n"
        "-transplantation: EMS concept\n"
        "-is: none\n"
        "-an: none\n"
        "-option: none\n"
        "\n"
        "Step2: Refine EMS concept from Step 1 by following criteria,\n"
        "1.concatenate EMS concept spans\n"
        "2.remove extra irrelevant words in EMS concept\n"
        "-cough: EMS concept\n"
        "-wheezing: EMS concept\n"
        "-shortness of breath: EMS concept\n"
        "-Lung transplantation: EMS concept\n"
        "\n"
        "Step3: Return the your result:\n"
        "[\"cough\", \"wheezing\", \"shortness of breath\", \"Lung transplantation\"]\n"
        "\n"
        "Now is the real text: {text}";
    return tmpl;
}

std::string render_extraction_prompt(std::string_view text) {
    return prompting::substitute(extraction_prompt_template(), {{"text", std::string(text)}});
}

std::vector<std::string> parse_concept_list(std::string_view completion) {
    const std::size_t close = completion.rfind(']');
    if (close == std::string_view::npos)
        throw UnparseableList("no closing bracket in: " + std::string(completion));
    const std::size_t open = completion.rfind('[', close);
    if (open == std::string_view::npos)
        throw UnparseableList("no opening bracket in: " + std::string(completion));

    const std::string_view body = completion.substr(open + 1, close - open - 1);
    std::vector<std::string> items;
    std::size_t i = 0;
    auto push = [&items](std::string_view raw) {
        std::size_t begin = raw.find_first_not_of(" \t\r\n");
        if (begin == std::string_view::npos) return;
        std::size_t end = raw.find_last_not_of(" \t\r\n");
        std::string_view item = raw.substr(begin, end - begin + 1);
        // tolerate a quote missing on either side
        if (!item.empty() && item.front() == '"') item.remove_prefix(1);
        if (!item.empty() && item.back() == '"') item.remove_suffix(1);
        if (!item.empty()) items.emplace_back(item);
    };
    while (i < body.size()) {
        while (i < body.size() && (body[i] == ' ' || body[i] == '\t' || body[i] == '\n' ||
                                   body[i] == '\r' || body[i] == ','))
            ++i;
        if (i >= body.size()) break;
        if (body[i] == '"') {
            const std::size_t end_quote = body.find('"', i + 1);
            if (end_quote != std::string_view::npos) {
                push(body.substr(i + 1, end_quote - i - 1));
                i = end_quote + 1;
                continue;
            }
        }
        std::size_t end = body.find(',', i);
        if (end == std::string_view::npos) end = body.size();
        push(body.substr(i, end - i));
        i = end + 1;
    }
    return items;
}

std::vector<std::string> extract_concepts(std::string_view text, backends::ChatBackend& backend,
                                          const std::string& model) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};

    backends::ChatRequest request;
    request.model = model;
    request.messages.push_back({"user", render_extraction_prompt(text)});
    const backends::ChatResponse response = backend.chat(request);

    std::vector<std::string> concepts;
    std::set<std::string> seen;
    for (std::string item : parse_concept_list(response.text)) {
        for (auto& c : item) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (seen.insert(item).second) concepts.push_back(std::move(item));
    }
    return concepts;
}

const std::vector<SemanticType>& semantic_type_whitelist() {
    static const std::vector<SemanticType> types = {
        {"Sosy", "Sign or Symptom"},
        {"Fndg", "Finding"},
        {"Lbtr", "Laboratory or Test Result"},
        {"Clna", "Clinical Attribute"},
        {"Qnco", "Quantitative Concept"},
        {"Qlco", "Qualitative Concept"},
        {"Dsyn", "Disease or Syndrome"},
        {"Mobd", "Mental or Behavioral Dysfunction"},
        {"Patf", "Pathologic Function"},
        {"Neop", "Neoplastic Process"},
        {"Cgab", "Congenital Abnormality"},
        {"Anab", "Anatomical Abnormality"},
        {"Inpo", "Injury or Poisoning"},
        {"Celf", "Cell or Molecular Dysfunction"},
        {"Bpoc", "Body Part/Organ/Organ Component"},
        {"Bodl", "Body Location or Region"},
        {"Bsoj", "Body Space or Junction"},
        {"Bodsys", "Body System"},
        {"Topp", "Therapeutic or Preventive Procedure"},
        {"Diap", "Diagnostic Procedure"},
        {"Lbpr", "Laboratory Procedure"},
        {"Impr", "Imaging Procedure"},
        {"Hlca", "Health Care Activity"},
        {"Clnd", "Clinical Drug"},
        {"Phsu", "Pharmacologic Substance"},
        {"Antb", "Antibiotic"},
        {"Vita", "Vitamin"},
        {"Orch", "Organic Chemical"},
        {"Aapp", "Amino Acid/Peptide/Protein"},
        {"Bacs", "Biologically Active Substance"},
        {"Hops", "Hazardous or Poisonous Substance"},
        {"Strd", "Steroid"},
        {"Horm", "Hormone"},
        {"Medd", "Medical Device"},
        {"Tmco", "Temporal Concept"},
        {"Spco", "Spatial Concept"},
        {"Fngp", "Functional Concept"},
    };
    return types;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

bool type_whitelisted(std::string_view code) {
    const std::string needle = lower(code);
    for (const SemanticType& t : semantic_type_whitelist())
        if (lower(t.code) == needle) return true;
    return false;
}

std::vector<NormalizedConcept> normalize_concepts(const std::vector<std::string>& concepts,
                                                  ConceptNormalizer& normalizer,
                                                  bool keep_unknown) {
    std::vector<NormalizedConcept> kept;
    for (const std::string& term : concepts) {
        const auto mapped = normalizer.normalize(term);
        if (!mapped) continue;
        const auto& [canonical, type] = *mapped;
        const bool keep = type == "unknown" ? keep_unknown : type_whitelisted(type);
        if (keep) kept.push_back({term, canonical, type});
    }
    return kept;
}

}  // namespace emsrag::coverage
