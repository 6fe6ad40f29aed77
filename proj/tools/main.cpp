#include "rsflicker/cli.hpp"

int main(int argc, char** argv) { return rsf::run_cli(argc, argv); }
