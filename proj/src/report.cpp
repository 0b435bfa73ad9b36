#include "selmer/report.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "selmer/error.hpp"

namespace selmer::cli {

const std::vector<std::string>& section_order() {
    static const std::vector<std::string> order = {
        "classification", "parity", "class_sets", "brandt", "eigenforms", "admissible_scan",
        "period", "kolyvagin_constants", "congruence_evaluations", "verdict"};
    return order;
}

Format parse_format(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "structured" || s == "json") return Format::structured;
    fail_pre("cli", "emit_report", "unknown format " + s);
}

namespace {

std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool flat_array(const Json& v) {
    if (!v.is_array()) return false;
    for (auto& x : v)
        if (x.is_object() || (x.is_array() && !flat_array(x))) return false;
    return true;
}

void render(std::ostringstream& os, const Json& v, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (v.is_object()) {
        // op first so the producing operation heads each block
        if (v.contains("op")) os << pad << "op: " << scalar(v["op"]) << "\n";
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (it.key() == "op") continue;
            const Json& x = it.value();
            if (x.is_object() || (x.is_array() && !flat_array(x))) {
                os << pad << it.key() << ":" << (x.empty() ? " (none)" : "") << "\n";
                render(os, x, indent + 2);
            } else if (x.is_array()) {
                os << pad << it.key() << ": " << (x.empty() ? "(none)" : x.dump()) << "\n";
            } else {
                os << pad << it.key() << ": " << scalar(x) << "\n";
            }
        }
    } else if (v.is_array()) {
        for (auto& x : v) {
            if (x.is_object()) {
                os << pad << "-\n";
                render(os, x, indent + 2);
            } else {
                os << pad << "- " << (x.is_array() ? x.dump() : scalar(x)) << "\n";
            }
        }
    } else {
        os << pad << scalar(v) << "\n";
    }
}

}  // namespace

std::string emit_report(const ReportDocument& doc, Format f) {
    if (f == Format::structured) {
        Json j = {{"sections", doc.sections}, {"provenance", doc.provenance}};
        if (!doc.timing.is_null()) j["timing"] = doc.timing;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "selmerkit report\n";
    if (doc.provenance.contains("config_hash")) os << "config hash: " << scalar(doc.provenance["config_hash"]) << "\n";
    std::vector<std::string> names;
    for (auto& n : section_order())
        if (doc.sections.contains(n)) names.push_back(n);
    for (auto it = doc.sections.begin(); it != doc.sections.end(); ++it)
        if (std::find(names.begin(), names.end(), it.key()) == names.end()) names.push_back(it.key());
    for (auto& n : names) {
        os << "\n[" << n << "]\n";
        render(os, doc.sections[n], 2);
    }
    os << "\n[provenance]\n";
    render(os, doc.provenance, 2);
    if (!doc.timing.is_null()) {
        os << "\n[timing]\n";
        render(os, doc.timing, 2);
    }
    return os.str();
}

ReportDocument parse_report(const std::string& structured) {
    Json j;
    try {
        j = Json::parse(structured);
    } catch (const Json::exception& e) {
        fail_pre("cli", "parse_report", e.what());
    }
    ReportDocument d;
    if (!j.is_object() || !j.contains("sections") || !j.contains("provenance"))
        fail_pre("cli", "parse_report", "missing sections or provenance");
    d.sections = j["sections"];
    d.provenance = j["provenance"];
    if (j.contains("timing")) d.timing = j["timing"];
    return d;
}

}  // namespace selmer::cli
