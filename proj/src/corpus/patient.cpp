#include "emsrag/corpus/patient.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace emsrag::corpus {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::vector<std::string>& default_drop_values() {
    static const std::vector<std::string> values = {"NA", "Not Applicable", "Not Recorded",
                                                    "Unknown"};
    return values;
}

std::optional<FilteredFields> filter_patient_fields(
    const std::vector<std::pair<std::string, std::string>>& fields, double reject_fraction,
    const std::vector<std::string>& drop_values) {
    if (fields.empty()) throw std::invalid_argument("filter_patient_fields: record has no fields");
    FilteredFields out;
    out.fields.reserve(fields.size());
    for (const auto& [key, value] : fields) {
        const std::string v = trim(value);
        const bool drop = std::find(drop_values.begin(), drop_values.end(), v) != drop_values.end();
        if (drop)
            ++out.dropped;
        else
            out.fields.emplace_back(key, value);
    }
    // Strictly-greater test; the epsilon keeps an exact boundary ratio
    // (e.g. 3 of 10 at 0.30) on the "keep" side despite binary rounding.
    const double limit = reject_fraction * static_cast<double>(fields.size()) + 1e-9;
    if (static_cast<double>(out.dropped) > limit) return std::nullopt;
    return out;
}

std::string flatten_patient_record(
    const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += "; ";
        out += fields[i].first;
        out += ": ";
        out += fields[i].second;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_flattened(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> fields;
    if (text.empty()) return fields;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find("; ", pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view item = text.substr(pos, end - pos);
        const std::size_t colon = item.find(": ");
        if (colon == std::string_view::npos)
            throw std::invalid_argument("parse_flattened: segment without 'Key: Value' shape");
        fields.emplace_back(std::string(item.substr(0, colon)), std::string(item.substr(colon + 2)));
        if (end == text.size()) break;
        pos = end + 2;
    }
    return fields;
}

const std::vector<std::pair<std::string, SubjectArea>>& protocol_subject_table() {
    static const std::vector<std::pair<std::string, SubjectArea>> table = {
        // assessment
        {"General-Universal Patient Care/ Initial Patient Contact", SubjectArea::assessment},
        {"General-Individualized Patient Protocol", SubjectArea::assessment},
        // medical & OB
        {"Medical-Seizure", SubjectArea::medical_ob},
        {"Medical-Nausea/Vomiting", SubjectArea::medical_ob},
        {"Medical-Influenza-Like Illness/ Upper Respiratory Infection", SubjectArea::medical_ob},
        {"Medical-Abdominal Pain", SubjectArea::medical_ob},
        {"Medical-Altered Mental Status", SubjectArea::medical_ob},
        {"OB/GYN-Pregnancy Related Emergencies", SubjectArea::medical_ob},
        {"Medical-Supraventricular Tachycardia (Including Atrial Fibrillation)", SubjectArea::medical_ob},
        {"Medical-Cardiac Chest Pain", SubjectArea::medical_ob},
        {"Medical-Tachycardia", SubjectArea::medical_ob},
        {"Medical-Syncope", SubjectArea::medical_ob},
        {"Medical-Stroke/TIA", SubjectArea::medical_ob},
        {"Medical-Respiratory Distress/Asthma/COPD/Reactive Airway", SubjectArea::medical_ob},
        {"Medical-Respiratory Distress-Bronchiolitis", SubjectArea::medical_ob},
        {"Medical-Diarrhea", SubjectArea::medical_ob},
        {"Medical-Hypoglycemia/Diabetic Emergency", SubjectArea::medical_ob},
        {"Medical-Hyperglycemia", SubjectArea::medical_ob},
        {"Medical-Allergic Reaction/Anaphylaxis", SubjectArea::medical_ob},
        {"Medical-Hypertension", SubjectArea::medical_ob},
        {"Medical-Bradycardia", SubjectArea::medical_ob},
        {"Medical-Pulmonary Edema/CHF", SubjectArea::medical_ob},
        {"Medical-Hypotension/Shock (Non-Trauma)", SubjectArea::medical_ob},
        {"Medical-Opioid Poisoning/Overdose", SubjectArea::medical_ob},
        {"Medical-ST-Elevation Myocardial Infarction (STEMI)", SubjectArea::medical_ob},
        {"Medical-Ventricular Tachycardia (With Pulse)", SubjectArea::medical_ob},
        {"Medical-Stimulant Poisoning/Overdose", SubjectArea::medical_ob},
        {"Medical-Respiratory Distress-Croup", SubjectArea::medical_ob},
        {"Medical-Adrenal Insufficiency", SubjectArea::medical_ob},
        {"Medical-Beta Blocker Poisoning/Overdose", SubjectArea::medical_ob},
        {"Medical-Calcium Channel Blocker Poisoning/Overdose", SubjectArea::medical_ob},
        {"OB/GYN-Gynecologic Emergencies", SubjectArea::medical_ob},
        {"OB/GYN-Childbirth/Labor/Delivery", SubjectArea::medical_ob},
        {"OB/GYN-Eclampsia", SubjectArea::medical_ob},
        {"OB/GYN-Post-partum Hemorrhage", SubjectArea::medical_ob},
        {"General-Overdose/Poisoning/Toxic Ingestion", SubjectArea::medical_ob},
        {"General-Fever", SubjectArea::medical_ob},
        {"General-Epistaxis", SubjectArea::medical_ob},
        {"General-Back Pain", SubjectArea::medical_ob},
        {"General-Pain Control", SubjectArea::medical_ob},
        {"Environmental-Altitude Sickness", SubjectArea::medical_ob},
        {"Environmental-Cold Exposure", SubjectArea::medical_ob},
        {"Environmental-Hypothermia", SubjectArea::medical_ob},
        {"Environmental-Heat Stroke/Hyperthermia", SubjectArea::medical_ob},
        {"Environmental-Heat Exposure/Exhaustion", SubjectArea::medical_ob},
        // airway
        {"Airway", SubjectArea::airway},
        {"Airway-Failed", SubjectArea::airway},
        {"Airway-Sedation Assisted (Non-Paralytic)", SubjectArea::airway},
        {"Airway-Rapid Sequence Induction (RSI-Paralytic)", SubjectArea::airway},
        {"Airway-Obstruction/Foreign Body", SubjectArea::airway},
        // EMS operations
        {"Exposure-Airway/Inhalation Irritants", SubjectArea::ems_operations},
        {"General-Neglect or Abuse Suspected", SubjectArea::ems_operations},
        {"Exposure-Explosive/ Blast Injury", SubjectArea::ems_operations},
        {"General-IV Access", SubjectArea::ems_operations},
        {"General-Refusal of Care", SubjectArea::ems_operations},
        {"General-Behavioral/Patient Restraint", SubjectArea::ems_operations},
        {"General-Interfacility Transfers", SubjectArea::ems_operations},
        {"General-Spinal Immobilization/Clearance", SubjectArea::ems_operations},
        {"General-Medical Device Malfunction", SubjectArea::ems_operations},
        {"General-Law Enforcement - Assist with Law Enforcement Activity", SubjectArea::ems_operations},
        {"General-Extended Care Guidelines", SubjectArea::ems_operations},
        {"General-Exception Protocol", SubjectArea::ems_operations},
        {"General-Indwelling Medical Devices/Equipment", SubjectArea::ems_operations},
        {"General-Community Paramedicine / Mobile Integrated Healthcare", SubjectArea::ems_operations},
        {"General-Law Enforcement - Blood for Legal Purposes", SubjectArea::ems_operations},
        {"General-Dental Problems", SubjectArea::ems_operations},
        {"Exposure-Biological/Infectious", SubjectArea::ems_operations},
        {"Exposure-Carbon Monoxide", SubjectArea::ems_operations},
        {"Exposure-Chemicals to Eye", SubjectArea::ems_operations},
        {"Exposure-Smoke Inhalation", SubjectArea::ems_operations},
        {"Exposure-Cyanide", SubjectArea::ems_operations},
        {"Exposure-Radiologic Agents", SubjectArea::ems_operations},
        {"Exposure-Blistering Agents", SubjectArea::ems_operations},
        {"Exposure-Nerve Agents", SubjectArea::ems_operations},
        // cardiovascular
        {"General-Cardiac Arrest", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Asystole", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Determination of Death / Withholding Resuscitative Efforts", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Pulseless Electrical Activity", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Do Not Resuscitate", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Ventricular Fibrillation/ Pulseless Ventricular Tachycardia", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Post Resuscitation Care", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Special Resuscitation Orders", SubjectArea::cardiovascular},
        {"Cardiac Arrest-Hypothermia-Therapeutic", SubjectArea::cardiovascular},
        // pediatrics
        {"Medical-Apparent Life Threatening Event (ALTE)", SubjectArea::pediatrics},
        {"Medical-Newborn/ Neonatal Resuscitation", SubjectArea::pediatrics},
        // trauma
        {"Environmental-Frostbite/Cold Injury", SubjectArea::trauma},
        {"Injury-Head", SubjectArea::trauma},
        {"Injury-Extremity", SubjectArea::trauma},
        {"Injury-Burns-Thermal", SubjectArea::trauma},
        {"Injury-General Trauma Management", SubjectArea::trauma},
        {"Injury-Multisystem", SubjectArea::trauma},
        {"Injury-Eye", SubjectArea::trauma},
        {"Injury-Mass/Multiple Casualties", SubjectArea::trauma},
        {"Injury-Amputation", SubjectArea::trauma},
        {"Injury-Spinal Cord", SubjectArea::trauma},
        {"Injury-Conducted Electrical Weapon (e.g., Taser)", SubjectArea::trauma},
        {"Injury-Bleeding/ Hemorrhage Control", SubjectArea::trauma},
        {"Injury-Bites and Envenomations-Land", SubjectArea::trauma},
        {"Injury-Facial Trauma", SubjectArea::trauma},
        {"Injury-Cardiac Arrest", SubjectArea::trauma},
        {"Injury-Crush Syndrome", SubjectArea::trauma},
        {"Injury-Thoracic", SubjectArea::trauma},
        {"Injury-Drowning/Near Drowning", SubjectArea::trauma},
        {"Injury-Diving Emergencies", SubjectArea::trauma},
        {"Injury-Electrical Injuries", SubjectArea::trauma},
        {"Injury-Topical Chemical Burn", SubjectArea::trauma},
        {"Injury-Impaled Object", SubjectArea::trauma},
        {"Injury-Bites and Envenomations-Marine", SubjectArea::trauma},
        {"Injury-Lightning/Lightning Strike", SubjectArea::trauma},
        {"Injury-SCUBA Injury/Accidents", SubjectArea::trauma},
    };
    return table;
}

namespace {

const std::unordered_map<std::string_view, SubjectArea>& protocol_lookup() {
    static const std::unordered_map<std::string_view, SubjectArea> lookup = [] {
        std::unordered_map<std::string_view, SubjectArea> map;
        for (const auto& [protocol, subject] : protocol_subject_table())
            map.emplace(protocol, subject);
        return map;
    }();
    return lookup;
}

}  // namespace

SubjectArea map_protocol_to_subject(std::string_view protocol) {
    const auto& lookup = protocol_lookup();
    const auto it = lookup.find(protocol);
    return it == lookup.end() ? SubjectArea::others : it->second;
}

bool protocol_is_mapped(std::string_view protocol) {
    return protocol_lookup().count(protocol) > 0;
}

}  // namespace emsrag::corpus
