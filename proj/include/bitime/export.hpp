#pragma once

#include "bitime/grid.hpp"
#include "bitime/oracle.hpp"
#include "bitime/varcalc.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace bitime::io {

/// Shortest round-trip decimal; "inf" for +inf.
std::string format_number(double v);

/// Header: x1..xn,value. One row per node.
void write_field_csv(std::ostream& os, const minitime::ValueField& f);
nlohmann::json field_header(const minitime::ValueField& f);

nlohmann::json oracle_json(const trajectory::OracleResult& r);
/// Header: t,x1..xn.
void write_trajectory_csv(std::ostream& os, const trajectory::Trajectory& tr);

nlohmann::json verdict_json(const varcalc::MembershipVerdict& v, const Vector& point, const Vector& candidate);
nlohmann::json cone_json(const varcalc::ConeEstimate& c);
/// One generator per row, columns c1..cm.
void write_generators_csv(std::ostream& os, const std::vector<Vector>& generators);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace bitime::io
