#include "cgc/report.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <vector>

#include "cgc/text.hpp"
#include "cgc/version.hpp"

namespace cgc {

Json report_skeleton(const std::string& subcommand, Json input_echo) {
  Json doc;
  doc["tool"] = "coarse";
  doc["version"] = kVersion;
  doc["subcommand"] = subcommand;
  doc["input"] = std::move(input_echo);
  doc["results"] = Json::object();
  return doc;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json control_json(const ControlCertificate& cert) {
  Json j;
  j["sample"] = cert.sample_spec;
  Json rows = Json::array();
  for (const ControlRow& r : cert.rows) {
    Json row;
    row["delta"] = rat_text(r.delta);
    row["eps_max"] = rat_text(r.eps_max);
    if (r.predicted) {
      row["predicted"] = rat_text(*r.predicted);
      row["pass"] = r.pass;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (cert.k1) j["k1"] = rat_text(*cert.k1);
  if (cert.k2) j["k2"] = rat_text(*cert.k2);
  j["all_pass"] = cert.all_pass();
  return j;
}

Json growth_json(const GrowthTable& table) {
  Json j;
  j["metric"] = table.metric_name;
  j["s"] = rat_text(table.s);
  j["base"] = element_text(table.base);
  Json counts = Json::array();
  for (size_t n = 0; n < table.counts.size(); ++n) {
    Json row;
    row["n"] = n;
    row["count"] = table.counts[n];
    counts.push_back(std::move(row));
  }
  j["counts"] = std::move(counts);
  return j;
}

Json verdict_json(const ClassificationVerdict& v) {
  auto record = [](const InvariantRecord& r) {
    Json j;
    if (r.torsion_free_rank) j["torsion_free_rank"] = *r.torsion_free_rank;
    else j["torsion_free_rank"] = nullptr;
    j["finitely_generated"] = r.finitely_generated;
    if (r.cd_q) j["cd_q"] = *r.cd_q;
    else j["cd_q"] = nullptr;
    if (r.asdim) j["asdim"] = *r.asdim;
    else j["asdim"] = nullptr;
    return j;
  };
  Json j;
  j["left"] = record(v.left);
  j["right"] = record(v.right);
  j["verdict"] = verdict_text(v.verdict);
  j["rule"] = v.rule;
  return j;
}

std::string control_csv(const ControlCertificate& cert) {
  std::ostringstream out;
  out << "delta,eps_max,predicted,pass\n";
  for (const ControlRow& r : cert.rows) {
    out << csv_field(rat_text(r.delta)) << ',' << csv_field(rat_text(r.eps_max))
        << ',';
    if (r.predicted)
      out << csv_field(rat_text(*r.predicted)) << ','
          << (r.pass ? "true" : "false");
    else
      out << ',';
    out << '\n';
  }
  return out.str();
}

std::string growth_csv(const GrowthTable& table) {
  std::ostringstream out;
  out << "n,count\n";
  for (size_t n = 0; n < table.counts.size(); ++n)
    out << n << ',' << table.counts[n] << '\n';
  return out.str();
}

namespace {

void pad(std::ostringstream& out, const std::string& s, size_t width) {
  out << s;
  for (size_t i = s.size(); i < width; ++i) out << ' ';
}

}  // namespace

std::string control_text(const ControlCertificate& cert) {
  std::ostringstream out;
  if (!cert.sample_spec.empty()) out << "sample: " << cert.sample_spec << '\n';
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"delta", "eps_max", "predicted", "pass"});
  for (const ControlRow& r : cert.rows)
    rows.push_back({rat_text(r.delta), rat_text(r.eps_max),
                    r.predicted ? rat_text(*r.predicted) : std::string{},
                    r.predicted ? (r.pass ? "yes" : "NO") : std::string{}});
  std::array<size_t, 4> widths{};
  for (const auto& row : rows)
    for (size_t c = 0; c < 4; ++c) widths[c] = std::max(widths[c], row[c].size());
  for (const auto& row : rows) {
    for (size_t c = 0; c < 4; ++c) {
      if (c) out << "  ";
      pad(out, row[c], widths[c]);
    }
    out << '\n';
  }
  if (cert.k1) out << "k1: " << rat_text(*cert.k1) << '\n';
  if (cert.k2) out << "k2: " << rat_text(*cert.k2) << '\n';
  return out.str();
}

std::string growth_text(const GrowthTable& table) {
  std::ostringstream out;
  out << "metric: " << table.metric_name << "  s: " << rat_text(table.s)
      << "  base: " << element_text(table.base) << '\n';
  out << "n  count\n";
  for (size_t n = 0; n < table.counts.size(); ++n)
    out << n << "  " << table.counts[n] << '\n';
  return out.str();
}

std::string verdict_text_block(const ClassificationVerdict& v) {
  auto record = [](const InvariantRecord& r) {
    std::string s = "rank=";
    s += r.torsion_free_rank ? std::to_string(*r.torsion_free_rank) : "?";
    s += r.finitely_generated ? ", finitely generated" : ", not finitely generated";
    if (r.cd_q) s += ", cd_q=" + std::to_string(*r.cd_q);
    if (r.asdim) s += ", asdim=" + std::to_string(*r.asdim);
    return s;
  };
  std::ostringstream out;
  out << "left:  " << record(v.left) << '\n';
  out << "right: " << record(v.right) << '\n';
  out << "verdict: " << verdict_text(v.verdict) << "  (rule: " << v.rule << ")\n";
  return out.str();
}

}  // namespace cgc
