#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace selmer::cli {

using Json = nlohmann::json;

/// Sections are keyed by name; each section object carries an "op" naming the operation
/// behind its numbers (nested objects may name their own). Timing is kept apart so the
/// rest of the document is reproducible.
struct ReportDocument {
    Json sections = Json::object();
    Json provenance = Json::object();
    Json timing;  // null unless requested

    bool operator==(const ReportDocument& o) const {
        return sections == o.sections && provenance == o.provenance && timing == o.timing;
    }
};

/// Canonical section order for rendering.
const std::vector<std::string>& section_order();

enum class Format { text, structured };
Format parse_format(const std::string& s);

std::string emit_report(const ReportDocument& doc, Format f);
/// Inverse of the structured form.
ReportDocument parse_report(const std::string& structured);

}  // namespace selmer::cli
