#include "mfg/cli.hpp"

int main(int argc, char** argv) { return mfg::cli::run_command(argc, argv); }
