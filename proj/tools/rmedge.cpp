#include "rmedge/cli.hpp"

int main(int argc, char** argv) { return rmedge::cli::run(argc, argv); }
