#include "robin/cli/report.hpp"

#include <cstdio>
#include <ostream>

#include "robin/error.hpp"

namespace robin::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// RFC 4180 quoting, only when needed.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "warn") return Status::warn;
  if (s == "fail") return Status::fail;
  throw Error("unknown status '" + s + "'");
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::warn:
      return "warn";
    case Status::fail:
      return "fail";
  }
  return "?";
}

StatusCounts count_status(const std::vector<ReportRow>& rows) {
  StatusCounts c;
  for (const auto& r : rows) {
    if (r.status == Status::pass) ++c.pass;
    if (r.status == Status::warn) ++c.warn;
    if (r.status == Status::fail) ++c.fail;
  }
  return c;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "check,n,i,alpha,observed,predicted,residual,slope,status,note\n";
  for (const auto& r : rows) {
    out << csv_field(r.check) << ',' << (r.n ? std::to_string(*r.n) : "") << ',' << (r.i ? std::to_string(*r.i) : "")
        << ',' << (r.alpha ? num(*r.alpha) : "") << ',' << num(r.observed) << ',' << num(r.predicted) << ','
        << num(r.residual) << ',' << (r.slope ? num(*r.slope) : "") << ',' << status_name(r.status) << ','
        << csv_field(r.note) << '\n';
  }
}

json to_json(const ReportRow& r) {
  json j;
  j["check"] = r.check;
  j["n"] = r.n ? json(*r.n) : json(nullptr);
  j["i"] = r.i ? json(*r.i) : json(nullptr);
  j["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
  j["observed"] = r.observed;
  j["predicted"] = r.predicted;
  j["residual"] = r.residual;
  j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  j["status"] = status_name(r.status);
  j["note"] = r.note;
  return j;
}

ReportRow row_from_json(const json& j) {
  ReportRow r;
  r.check = j.at("check").get<std::string>();
  if (!j.at("n").is_null()) r.n = j.at("n").get<int>();
  if (!j.at("i").is_null()) r.i = j.at("i").get<int>();
  if (!j.at("alpha").is_null()) r.alpha = j.at("alpha").get<double>();
  r.observed = j.at("observed").get<double>();
  r.predicted = j.at("predicted").get<double>();
  r.residual = j.at("residual").get<double>();
  if (!j.at("slope").is_null()) r.slope = j.at("slope").get<double>();
  r.status = parse_status(j.at("status").get<std::string>());
  r.note = j.at("note").get<std::string>();
  return r;
}

}  // namespace robin::cli
