#include "ggm/cli.hpp"

int main(int argc, char** argv) { return ggm::cli::dispatch(argc, argv); }
