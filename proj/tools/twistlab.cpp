#include "twistlab/cli.hpp"

int main(int argc, char** argv) { return twistlab::cli::run(argc, argv); }
