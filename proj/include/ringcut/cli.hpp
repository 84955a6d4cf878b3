#pragma once

namespace ringcut::cli {

// Entry point behind the ringcut binary. Exit codes: 0 success, 2 usage
// error, 1 runtime error.
int cmd_dispatch(int argc, const char* const* argv);

}  // namespace ringcut::cli
