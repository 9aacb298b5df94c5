#pragma once

namespace vectormix {

/// Command-line entry point. Returns 0 on success, 1 on invalid input and 2
/// on numerical failure (including failed verification checks).
int run_cli(int argc, char** argv);

}  // namespace vectormix
