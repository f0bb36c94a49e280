#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace robin::cli {

enum class Status { pass, warn, fail };

[[nodiscard]] const char* status_name(Status s);

struct ReportRow {
  std::string check;
  std::optional<int> n;
  std::optional<int> i;
  std::optional<double> alpha;
  double observed = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  std::optional<double> slope;
  Status status = Status::pass;
  std::string note;
};

struct StatusCounts {
  std::size_t pass = 0;
  std::size_t warn = 0;
  std::size_t fail = 0;
};

[[nodiscard]] StatusCounts count_status(const std::vector<ReportRow>& rows);

/// Header: check,n,i,alpha,observed,predicted,residual,slope,status,note
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);

[[nodiscard]] nlohmann::json to_json(const ReportRow& row);
[[nodiscard]] ReportRow row_from_json(const nlohmann::json& j);

}  // namespace robin::cli
