#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shg/correlator.hpp"

namespace shg::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // a verification tolerance was exceeded
  kConfigError = 2,
  kRegionError = 3,
  kNonConvergence = 4,
  kInternalError = 5,
};

struct RunConfig {
  ModelParams params;
  std::vector<OperatorSpec> operators;
  std::map<std::string, std::size_t> by_name;
  CorrelatorRequest request;
  bool has_request = false;
  std::string format = "csv";  // csv, json or text
  std::string path;            // empty: standard output

  const OperatorSpec& op(const std::string& name) const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Table of per-composition rows followed by the totals row.
std::string format_result(const WrResult& w, const std::string& format);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace shg::cli
