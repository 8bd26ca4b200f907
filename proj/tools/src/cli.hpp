#pragma once

namespace amc::cli {

// Exit codes: 0 success, 1 verdict mismatch against --expect, 2 usage or
// input error, 3 resource limit exceeded.
int run(int argc, char** argv);

}  // namespace amc::cli
