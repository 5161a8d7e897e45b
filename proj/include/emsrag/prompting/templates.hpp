#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace emsrag::prompting {

// Named prompt-template parts with {placeholder} slots. The built-in set is
// version "v1"; load_dir() overlays any <name>.txt files found in a directory
// so deployments can customize wording without a rebuild. The version string
// travels into every prompt bundle and run report.
struct TemplateSet {
    std::string version;

    std::string system;              // shared system message
    std::string answer_instruction;  // appended to every family
    std::string question_block;      // {question} {options}
    std::string exemplar_block;      // {question} {options} {answers}
    std::string expertise_block;     // {certification} {subjects}
    std::string kb_context_header;
    std::string pr_context_header;
    std::string context_item;        // {tag} {rank} {text}

    // Per-family user-message templates. Placeholders: {expertise_block}
    // {context_block} {exemplars} {question_block} {answer_instruction}.
    std::string zero_shot_user;
    std::string few_shot_user;
    std::string cot_user;
    std::string rag_user;

    static const TemplateSet& builtin_v1();

    // Starts from builtin_v1 and overrides each part that has a <name>.txt
    // file in `dir` (e.g. cot_user.txt). A trailing newline added by text
    // editors is stripped. Version becomes "<dirname>" unless a version.txt
    // is present.
    static TemplateSet load_dir(const std::filesystem::path& dir);

    // The parts as a name -> text map (used by load_dir and the asset
    // round-trip test).
    std::map<std::string, std::string*> parts();
};

// Single-pass placeholder substitution: each "{name}" present in `values` is
// replaced by its value verbatim (replacement text is never re-scanned);
// unknown placeholders are left as-is.
std::string substitute(std::string_view tmpl,
                       const std::map<std::string, std::string>& values);

}  // namespace emsrag::prompting
