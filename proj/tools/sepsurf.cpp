#include "sepsurf/cli.hpp"

int main(int argc, char** argv) { return sepsurf::cli::run(argc, argv); }
