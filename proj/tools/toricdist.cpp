#include "toricdist/cli.hpp"

int main(int argc, char** argv) { return toricdist::run_cli(argc, argv); }
