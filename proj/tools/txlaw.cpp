#include "txlaw/cli.hpp"

int main(int argc, char** argv) { return txlaw::run_cli(argc, argv); }
