#include "finiteband_cli/cli.hpp"

int main(int argc, char** argv) { return finiteband::cli::run(argc, argv); }
