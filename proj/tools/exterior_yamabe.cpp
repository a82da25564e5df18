#include "eyam/cli.hpp"

int main(int argc, char** argv) { return eyam::cli::run(argc, argv); }
