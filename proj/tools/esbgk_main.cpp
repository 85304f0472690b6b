#include "esbgk/cli.hpp"

int main(int argc, char** argv) { return esbgk::run_cli(argc, argv); }
