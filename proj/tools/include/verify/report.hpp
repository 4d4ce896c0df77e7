#pragma once

#include "heisenberg/identities.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace verify {

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);

nlohmann::ordered_json to_json(const heis::IntegralResult& r);
nlohmann::ordered_json to_json(const heis::IdentityReport& r);

/// Exit status for a set of reports: 0 all pass, 1 any fail, 2 any
/// inconclusive and no fail.
int exit_code(const std::vector<heis::IdentityReport>& reports);

/// json: one object with the reports and a summary; floats as %.17g.
/// csv: per integral a "# report side part" line, then "level,value,delta"
///      rows for the refinement trail and the excision trail.
/// text: an aligned table followed by metadata and notes.
void emit_report(const std::vector<heis::IdentityReport>& reports, const std::string& format, std::ostream& out);
/// Writes to `path`, or to standard output when it is empty. Throws
/// std::runtime_error on I/O failure.
void write_report(const std::vector<heis::IdentityReport>& reports, const std::string& format,
                  const std::string& path);

}  // namespace verify
