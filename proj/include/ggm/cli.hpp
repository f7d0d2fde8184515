#pragma once

#include <string>
#include <vector>

namespace ggm::cli {

/**
 * Command-line front door.
 *
 *   space build|analyze, norm eval, op apply, certify run, report index
 *
 * Artifacts go to --out, else $GGM_OUT_DIR, else ./ggm_out. Exit codes: 0 on
 * success, 1 on validation or I/O errors, 2 when a certification fails.
 */
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);   // args exclude the program name

}  // namespace ggm::cli
