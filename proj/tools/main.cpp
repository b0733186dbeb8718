#include "smdp/harness/cli.hpp"

int main(int argc, char** argv) { return smdp::harness::cli_main(argc, argv); }
