#pragma once

// Report emission: a JSON document that echoes its full input spec, plus CSV
// and aligned-table renderings of certificates, growth tables, and verdicts.
// All rationals print as "a/b" so exactness stays visible end to end.

#include <string>

#include <json.hpp>

#include "cgc/verify.hpp"

namespace cgc {

using Json = nlohmann::ordered_json;

// Common document frame: tool name, version, input echo, empty results slot.
Json report_skeleton(const std::string& subcommand, Json input_echo);

// RFC 4180 field quoting (quotes only when the field needs it).
std::string csv_field(const std::string& raw);

Json control_json(const ControlCertificate& cert);
Json growth_json(const GrowthTable& table);
Json verdict_json(const ClassificationVerdict& v);

// Schema: delta,eps_max,predicted,pass (predicted empty when absent).
std::string control_csv(const ControlCertificate& cert);
// Schema: n,count
std::string growth_csv(const GrowthTable& table);

std::string control_text(const ControlCertificate& cert);
std::string growth_text(const GrowthTable& table);
std::string verdict_text_block(const ClassificationVerdict& v);

}  // namespace cgc
