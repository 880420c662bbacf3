#include "graphled/cli.hpp"

int main(int argc, char** argv) { return graphled::cli::main(argc, argv); }
