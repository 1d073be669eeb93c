#include "excesslab/cli.hpp"

int main(int argc, char** argv) { return excesslab::run_cli(argc, argv); }
