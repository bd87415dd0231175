#pragma once

#include <string>

#include "json.hpp"

namespace aniso::cli {

using Json = nlohmann::ordered_json;

// Full command-line front end; returns the process exit status:
//   0 ok, 2 config error, 3 computation error, 4 invariant violation.
// The last distinguishes "the code broke" from "the inequality failed
// numerically", which is the interesting signal for CI.
int cli_main(int argc, const char* const* argv);

// Rendering of a result object into the emitted text formats. Exposed so the
// tests can check byte-level stability without shelling out.
std::string render_csv(const Json& result);
std::string render_svg(const Json& result);

// Content key for the result cache: subcommand + compute-relevant parameters
// + tolerances + code version, hashed to a hex filename.
std::string cache_key(const Json& config);

}  // namespace aniso::cli
