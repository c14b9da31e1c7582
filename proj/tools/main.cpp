#include "polarcp/cli.hpp"

int main(int argc, char** argv) { return polarcp::run_cli(argc, argv); }
