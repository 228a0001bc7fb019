#include "gengeom/cli.hpp"

int main(int argc, char** argv) { return gengeom::cli::run(argc, argv); }
