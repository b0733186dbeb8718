#pragma once

namespace smdp::harness {

/// Exit codes: 0 success, 1 validation failure or usage error, 2 runtime error.
int cli_main(int argc, char** argv);

}  // namespace smdp::harness
