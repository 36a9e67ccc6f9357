#include "cpi/cli/cli.h"

int main(int argc, char** argv) { return cpi::cli::cli_main(argc, argv); }
