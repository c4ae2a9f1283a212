#include "qcomp/cli.hpp"

int main(int argc, char** argv) { return qcomp::cli::run(argc, argv); }
