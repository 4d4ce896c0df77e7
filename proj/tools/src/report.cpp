#include "verify/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace verify {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json to_json(const heis::IntegralResult& r) {
  ordered_json j;
  j["value"] = r.value;
  j["errorEstimate"] = r.errorEstimate;
  j["cauchy"] = r.cauchy;
  ordered_json trail = ordered_json::array();
  for (const auto& [level, value] : r.refinementTrail) trail.push_back({{"level", level}, {"value", value}});
  j["refinementTrail"] = std::move(trail);
  if (r.excision) {
    const auto& e = *r.excision;
    ordered_json x;
    x["limit"] = e.limit;
    x["power"] = e.power;
    x["coefficient"] = e.coefficient;
    x["fitResidual"] = e.fitResidual;
    x["spread"] = e.spread;
    x["flagged"] = e.flagged;
    x["converged"] = e.converged;
    x["direct"] = e.direct ? ordered_json(*e.direct) : ordered_json(nullptr);
    ordered_json pts = ordered_json::array();
    for (const auto& [d, v] : e.points) pts.push_back({{"delta", d}, {"value", v}});
    x["points"] = std::move(pts);
    j["excision"] = std::move(x);
  }
  return j;
}

namespace {

ordered_json side_json(const heis::Side& s) {
  ordered_json j;
  j["value"] = s.value;
  j["error"] = s.error;
  ordered_json parts = ordered_json::array();
  for (const auto& p : s.parts) {
    ordered_json pj;
    pj["name"] = p.name;
    pj["integral"] = to_json(p.result);
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  return j;
}

/// Like ordered_json::dump(2), but floats use %.17g. Non-finite values
/// become null, as in dump().
void dump(const ordered_json& j, std::ostream& out, int indent) {
  const std::string in(indent + 2, ' '), close(indent, ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << in << ordered_json(k).dump() << ": ";
        dump(v, out, indent + 2);
      }
      out << '\n' << close << '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << in;
        dump(j[i], out, indent + 2);
      }
      out << '\n' << close << ']';
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_number(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

void emit_json(const std::vector<heis::IdentityReport>& reports, std::ostream& out) {
  ordered_json root;
  ordered_json list = ordered_json::array();
  int pass = 0, fail = 0, inconclusive = 0;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    if (r.verdict == heis::Verdict::pass) ++pass;
    if (r.verdict == heis::Verdict::fail) ++fail;
    if (r.verdict == heis::Verdict::inconclusive) ++inconclusive;
  }
  root["reports"] = std::move(list);
  root["summary"] = {{"pass", pass}, {"fail", fail}, {"inconclusive", inconclusive}, {"exitCode", exit_code(reports)}};
  dump(root, out, 0);
  out << '\n';
}

void csv_integral(const std::string& header, const heis::IntegralResult& r, std::ostream& out) {
  out << "# " << header << '\n' << "level,value,delta\n";
  const double smallest = r.excision && !r.excision->points.empty() ? r.excision->points.back().first : 0.0;
  for (const auto& [level, value] : r.refinementTrail)
    out << level << ',' << format_number(value) << ',' << format_number(smallest) << '\n';
  if (r.excision) {
    const int top = r.refinementTrail.empty() ? 0 : r.refinementTrail.back().first;
    for (const auto& [d, v] : r.excision->points) out << top << ',' << format_number(v) << ',' << format_number(d) << '\n';
  }
  out << '\n';
}

void emit_csv(const std::vector<heis::IdentityReport>& reports, std::ostream& out) {
  for (const auto& r : reports) {
    for (const auto& p : r.lhs.parts) csv_integral(r.name + " lhs " + p.name, p.result, out);
    for (const auto& p : r.rhs.parts) csv_integral(r.name + " rhs " + p.name, p.result, out);
  }
  out << "# summary\nidentity,verdict,lhs,rhs,residual,relResidual,tolerance\n";
  for (const auto& r : reports)
    out << r.name << ',' << heis::to_string(r.verdict) << ',' << format_number(r.lhs.value) << ','
        << format_number(r.rhs.value) << ',' << format_number(r.residual) << ',' << format_number(r.relResidual)
        << ',' << format_number(r.tolerance) << '\n';
}

void emit_text(const std::vector<heis::IdentityReport>& reports, std::ostream& out) {
  constexpr std::size_t kName = 16, kVerdict = 14, kNum = 25;
  out << pad("identity", kName) << pad("verdict", kVerdict) << pad("lhs", kNum) << pad("rhs", kNum)
      << pad("residual", kNum) << pad("relResidual", kNum) << "tolerance\n";
  for (const auto& r : reports)
    out << pad(r.name, kName) << pad(heis::to_string(r.verdict), kVerdict) << pad(format_number(r.lhs.value), kNum)
        << pad(format_number(r.rhs.value), kNum) << pad(format_number(r.residual), kNum)
        << pad(format_number(r.relResidual), kNum) << format_number(r.tolerance) << '\n';
  for (const auto& r : reports) {
    if (r.inputs.empty() && r.metadata.empty() && r.notes.empty()) continue;
    out << '\n' << r.name << '\n';
    for (const auto& [k, v] : r.inputs) out << "  " << pad(k, 34) << v << '\n';
    for (const auto& [k, v] : r.metadata) out << "  " << pad(k, 34) << format_number(v) << '\n';
    for (const auto& n : r.notes) out << "  note: " << n << '\n';
  }
}

}  // namespace

ordered_json to_json(const heis::IdentityReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["verdict"] = heis::to_string(r.verdict);
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = std::move(inputs);
  j["lhs"] = side_json(r.lhs);
  j["rhs"] = side_json(r.rhs);
  j["residual"] = r.residual;
  j["relResidual"] = r.relResidual;
  j["tolerance"] = r.tolerance;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  j["notes"] = r.notes;
  return j;
}

int exit_code(const std::vector<heis::IdentityReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.verdict == heis::Verdict::fail) return 1;
    if (r.verdict == heis::Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

void emit_report(const std::vector<heis::IdentityReport>& reports, const std::string& format, std::ostream& out) {
  if (format == "json")
    emit_json(reports, out);
  else if (format == "csv")
    emit_csv(reports, out);
  else if (format == "text")
    emit_text(reports, out);
  else
    throw std::invalid_argument("unknown report format '" + format + "'");
}

void write_report(const std::vector<heis::IdentityReport>& reports, const std::string& format,
                  const std::string& path) {
  if (path.empty()) {
    emit_report(reports, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_report(reports, format, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace verify
