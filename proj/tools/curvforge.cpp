#include "curvforge/cli.hpp"

int main(int argc, char** argv) { return curvforge::cli::run(argc, argv); }
