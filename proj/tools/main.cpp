#include "cli.hpp"

int main(int argc, char** argv) { return rankload::cli::run_cli(argc, argv); }
