#include "treepressure/cli.hpp"

int main(int argc, char** argv) { return treepressure::run_cli(argc, argv); }
