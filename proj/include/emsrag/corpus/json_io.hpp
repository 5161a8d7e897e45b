#pragma once

#include <nlohmann/json.hpp>

#include "emsrag/corpus/types.hpp"

// JSON (de)serialization for the canonical record types. Field names are the
// on-disk JSONL schema; deserialization validates enum values and throws
// emsrag::IoError with the offending field.

namespace emsrag::corpus {

void to_json(nlohmann::json& j, const Option& o);
void from_json(const nlohmann::json& j, Option& o);

void to_json(nlohmann::json& j, const QuestionRecord& r);
void from_json(const nlohmann::json& j, QuestionRecord& r);

void to_json(nlohmann::json& j, const KbDocument& d);
void from_json(const nlohmann::json& j, KbDocument& d);

void to_json(nlohmann::json& j, const PatientRecord& r);
void from_json(const nlohmann::json& j, PatientRecord& r);

void to_json(nlohmann::json& j, const Chunk& c);
void from_json(const nlohmann::json& j, Chunk& c);

}  // namespace emsrag::corpus
