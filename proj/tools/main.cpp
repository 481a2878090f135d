#include "fmnc/cli.hpp"

int main(int argc, char** argv) { return fmnc::cli_main(argc, argv); }
